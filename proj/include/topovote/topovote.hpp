#pragma once

// Umbrella header: spherical geometry, aggregation rules, condition
// checkers, degree computations, and the audit pipeline.

#include "topovote/audit.hpp"
#include "topovote/conditions.hpp"
#include "topovote/degree.hpp"
#include "topovote/errors.hpp"
#include "topovote/rules.hpp"
#include "topovote/sphere.hpp"
