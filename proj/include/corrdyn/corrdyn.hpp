#pragma once

#include "corrdyn/linalg.hpp"
#include "corrdyn/superoperator.hpp"
#include "corrdyn/corr_dynamics.hpp"
#include "corrdyn/generator.hpp"
#include "corrdyn/models.hpp"
#include "corrdyn/sampling.hpp"
