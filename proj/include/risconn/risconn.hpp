#pragma once

// Umbrella header: connectivity maximization for RIS-assisted UAV networks.

#include "risconn/candidates.hpp"
#include "risconn/channel.hpp"
#include "risconn/config.hpp"
#include "risconn/geometry.hpp"
#include "risconn/graph.hpp"
#include "risconn/harness.hpp"
#include "risconn/optimize.hpp"
#include "risconn/scenario.hpp"
#include "risconn/verify.hpp"
