#pragma once

#include "campana/toric_fan.hpp"
#include "campana/toric_polytopes.hpp"
#include "campana/mfull.hpp"
#include "campana/campana_count.hpp"
#include "campana/hyperbola.hpp"
#include "campana/io.hpp"
