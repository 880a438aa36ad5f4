#pragma once

#include "swapmap/cdcl.hpp"
#include "swapmap/clustering.hpp"
#include "swapmap/cnf.hpp"
#include "swapmap/error.hpp"
#include "swapmap/external_solver.hpp"
#include "swapmap/graph.hpp"
#include "swapmap/io.hpp"
#include "swapmap/mapping.hpp"
#include "swapmap/mapping_search.hpp"
#include "swapmap/oracle.hpp"
#include "swapmap/random.hpp"
#include "swapmap/router.hpp"
#include "swapmap/sat_encoding.hpp"
#include "swapmap/solver.hpp"
#include "swapmap/swap_strategy.hpp"
