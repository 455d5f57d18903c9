#pragma once

#include "bipro/bitset.hpp"
#include "bipro/catalogue.hpp"
#include "bipro/characters.hpp"
#include "bipro/config.hpp"
#include "bipro/error.hpp"
#include "bipro/group.hpp"
#include "bipro/io.hpp"
#include "bipro/lattice.hpp"
#include "bipro/perm.hpp"
#include "bipro/random.hpp"
#include "bipro/twobox.hpp"
#include "bipro/verify.hpp"
