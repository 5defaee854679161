#pragma once

#include "analytic.hpp"
#include "core.hpp"
#include "oracle.hpp"
#include "symsim.hpp"
#include "train.hpp"
