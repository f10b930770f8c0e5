#pragma once

#include "entscale/fermion/ring.hpp"
#include "entscale/fermion/symbol.hpp"
#include "entscale/fermion/toeplitz.hpp"
