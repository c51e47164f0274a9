#pragma once

#include "suplab/halfplane.hpp"
#include "suplab/lattice.hpp"
#include "suplab/atkin_lehner.hpp"
#include "suplab/qseries.hpp"
#include "suplab/census.hpp"
#include "suplab/parabolic.hpp"
#include "suplab/bounds.hpp"
#include "suplab/petersson.hpp"
#include "suplab/catalog.hpp"
#include "suplab/amplifier.hpp"
#include "suplab/pretrace.hpp"
#include "suplab/scan.hpp"
