#pragma once

#include "roughvar/fft.hpp"
#include "roughvar/grid.hpp"
#include "roughvar/sample.hpp"
#include "roughvar/kernels.hpp"
#include "roughvar/operators.hpp"
#include "roughvar/variation.hpp"
#include "roughvar/lpal.hpp"
#include "roughvar/weights.hpp"
#include "roughvar/config.hpp"
#include "roughvar/harness.hpp"
#include "roughvar/cli.hpp"
