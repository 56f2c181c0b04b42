// Umbrella header.
#pragma once

#include "polsim/ensembles.hpp"
#include "polsim/infotheory.hpp"
#include "polsim/io.hpp"
#include "polsim/network.hpp"
#include "polsim/noise.hpp"
#include "polsim/polarization.hpp"
#include "polsim/pom.hpp"
