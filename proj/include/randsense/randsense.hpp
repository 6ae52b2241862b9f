// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header.

#pragma once

#include "randsense/config.hpp"
#include "randsense/correlation.hpp"
#include "randsense/elmmse.hpp"
#include "randsense/errors.hpp"
#include "randsense/estimation.hpp"
#include "randsense/experiments.hpp"
#include "randsense/model.hpp"
#include "randsense/parallel.hpp"
#include "randsense/precoding.hpp"
#include "randsense/rng.hpp"
