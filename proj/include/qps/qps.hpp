#pragma once

#include "qps/qseries.hpp"
#include "qps/rspoly.hpp"
#include "qps/theta.hpp"
#include "qps/qalgebra.hpp"
#include "qps/wigner.hpp"
#include "qps/parallel.hpp"
