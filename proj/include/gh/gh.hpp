#pragma once

#include "gh/config.hpp"
#include "gh/error.hpp"
#include "gh/metric_space.hpp"
#include "gh/correspondence.hpp"
#include "gh/ghdist.hpp"
#include "gh/cone.hpp"
#include "gh/generic.hpp"
#include "gh/stability.hpp"
#include "gh/embed.hpp"
