#pragma once

#include "entscale/experiments/config.hpp"
#include "entscale/experiments/model_file.hpp"
#include "entscale/experiments/properties.hpp"
#include "entscale/experiments/report.hpp"
#include "entscale/experiments/run.hpp"
