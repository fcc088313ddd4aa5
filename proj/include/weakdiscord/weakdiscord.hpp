#pragma once

#include "weakdiscord/core.hpp"
#include "weakdiscord/rng.hpp"
#include "weakdiscord/correlations.hpp"
#include "weakdiscord/weak.hpp"
#include "weakdiscord/states.hpp"
#include "weakdiscord/io.hpp"
#include "weakdiscord/experiment.hpp"
