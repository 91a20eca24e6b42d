#pragma once

#include "gur/algebra.hpp"
#include "gur/detection.hpp"
#include "gur/linalg.hpp"
#include "gur/random.hpp"
#include "gur/serialization.hpp"
#include "gur/states.hpp"
#include "gur/uncertainty.hpp"
