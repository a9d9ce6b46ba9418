#pragma once

#include "abeltc/error.hpp"
#include "abeltc/expr.hpp"
#include "abeltc/linalg.hpp"
#include "abeltc/quadrature.hpp"
#include "abeltc/solver.hpp"
#include "abeltc/bench.hpp"
#include "abeltc/config.hpp"
