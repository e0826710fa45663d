#pragma once

#include "rashba_dot/error.hpp"
#include "rashba_dot/numerics.hpp"
#include "rashba_dot/special_functions.hpp"
#include "rashba_dot/radial_basis.hpp"
#include "rashba_dot/spectral_solver.hpp"
#include "rashba_dot/wavefunction.hpp"
#include "rashba_dot/units.hpp"
#include "rashba_dot/table_reference.hpp"
