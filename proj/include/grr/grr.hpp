#pragma once

#include "grr/arith.hpp"
#include "grr/cohomology.hpp"
#include "grr/divisor.hpp"
#include "grr/error.hpp"
#include "grr/exactness.hpp"
#include "grr/field.hpp"
#include "grr/homological.hpp"
#include "grr/linalg.hpp"
#include "grr/progression.hpp"
#include "grr/serialize.hpp"
#include "grr/sheaf.hpp"
#include "grr/sweep.hpp"
