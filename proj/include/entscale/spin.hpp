#pragma once

#include "entscale/spin/fits.hpp"
#include "entscale/spin/hamiltonian.hpp"
#include "entscale/spin/lightcone.hpp"
#include "entscale/spin/parent.hpp"
#include "entscale/spin/patch.hpp"
#include "entscale/spin/quench.hpp"
#include "entscale/spin/schmidt.hpp"
#include "entscale/spin/state.hpp"
