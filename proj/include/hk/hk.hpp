#pragma once

#include "rational.hpp"
#include "lattice.hpp"
#include "laurent.hpp"
#include "root_datum.hpp"
#include "weyl.hpp"
#include "hecke.hpp"
#include "spectral.hpp"
#include "reps.hpp"
#include "ktheory.hpp"
#include "random.hpp"
