#pragma once
// Umbrella header: the whole library in one include.

#include "attractor.hpp"
#include "bilinear.hpp"
#include "constitutive.hpp"
#include "energy.hpp"
#include "forcing.hpp"
#include "galerkin.hpp"
#include "grid.hpp"
#include "io.hpp"
#include "norms.hpp"
#include "params.hpp"
#include "rng.hpp"
#include "state.hpp"
#include "util.hpp"
