#pragma once

#include "iceshed/clip.hpp"
#include "iceshed/config.hpp"
#include "iceshed/driver.hpp"
#include "iceshed/error.hpp"
#include "iceshed/extrude.hpp"
#include "iceshed/fitting.hpp"
#include "iceshed/forces.hpp"
#include "iceshed/mesh.hpp"
#include "iceshed/mesh_io.hpp"
#include "iceshed/partition.hpp"
#include "iceshed/polygon.hpp"
#include "iceshed/section.hpp"
#include "iceshed/shedding.hpp"
#include "iceshed/strength.hpp"
#include "iceshed/vec.hpp"
