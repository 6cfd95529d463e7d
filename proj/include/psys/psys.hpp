#pragma once

#include "psys/errors.hpp"
#include "psys/pressure.hpp"
#include "psys/riemann.hpp"
#include "psys/field.hpp"
#include "psys/solver.hpp"
#include "psys/characteristics.hpp"
#include "psys/energy.hpp"
#include "psys/initial_data.hpp"
#include "psys/verify.hpp"
#include "psys/io.hpp"
#include "psys/config.hpp"
