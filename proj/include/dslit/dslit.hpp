#pragma once

// Everything except the command line layer (dslit/cli/), which needs
// CLI11 and nlohmann/json.

#include "dslit/closedform.hpp"
#include "dslit/electron_plate.hpp"
#include "dslit/errors.hpp"
#include "dslit/free_evolution.hpp"
#include "dslit/oracle.hpp"
#include "dslit/params.hpp"
#include "dslit/profile.hpp"
#include "dslit/series.hpp"
#include "dslit/version.hpp"
#include "dslit/visibility.hpp"
