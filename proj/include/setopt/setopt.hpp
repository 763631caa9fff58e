#pragma once

#include "setopt/types.hpp"
#include "setopt/cone.hpp"
#include "setopt/problem.hpp"
#include "setopt/examples.hpp"
#include "setopt/minimal.hpp"
#include "setopt/nelder_mead.hpp"
#include "setopt/direction.hpp"
#include "setopt/solver.hpp"
