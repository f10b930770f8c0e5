#pragma once

#include "entscale/linalg/dense.hpp"
#include "entscale/linalg/evolve.hpp"
#include "entscale/linalg/fourier.hpp"
#include "entscale/linalg/types.hpp"
