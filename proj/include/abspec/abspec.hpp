/* This file is part of the abspec library.
 * SPDX-License-Identifier: Apache-2.0
 */
#ifndef ABSPEC_ABSPEC_HPP
#define ABSPEC_ABSPEC_HPP

#include "core.hpp"
#include "dirac.hpp"
#include "nonrel.hpp"
#include "pw.hpp"
#include "radial.hpp"
#include "schrod.hpp"
#include "specfun.hpp"

#endif
