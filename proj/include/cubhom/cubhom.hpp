#pragma once

#include "cubhom/graph.hpp"
#include "cubhom/cube.hpp"
#include "cubhom/enumerate.hpp"
#include "cubhom/report.hpp"
#include "cubhom/axioms.hpp"
#include "cubhom/sparse_matrix.hpp"
#include "cubhom/chain.hpp"
#include "cubhom/snf.hpp"
#include "cubhom/homology.hpp"
#include "cubhom/homotopy.hpp"
