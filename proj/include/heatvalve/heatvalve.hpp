#pragma once

#include "heatvalve/bath_model.hpp"
#include "heatvalve/circuit_model.hpp"
#include "heatvalve/errors.hpp"
#include "heatvalve/gaussian.hpp"
#include "heatvalve/hopfield.hpp"
#include "heatvalve/lindblad_oracle.hpp"
#include "heatvalve/steady_state.hpp"
#include "heatvalve/sweep.hpp"
#include "heatvalve/units.hpp"
