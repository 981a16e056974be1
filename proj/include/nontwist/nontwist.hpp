#pragma once

#include "nontwist/contour.hpp"
#include "nontwist/flow.hpp"
#include "nontwist/hamiltonian.hpp"
#include "nontwist/map.hpp"
#include "nontwist/reconnection.hpp"
#include "nontwist/trace.hpp"
#include "nontwist/types.hpp"
