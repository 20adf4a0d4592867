// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QKCONE_QKCONE_HPP
#define QKCONE_QKCONE_HPP

#include "qkcone/cyclotomic.hpp"
#include "qkcone/gkm.hpp"
#include "qkcone/kring.hpp"
#include "qkcone/loopspace.hpp"
#include "qkcone/numeric.hpp"
#include "qkcone/params.hpp"
#include "qkcone/pfd.hpp"
#include "qkcone/polarize.hpp"
#include "qkcone/profile.hpp"
#include "qkcone/qrational.hpp"
#include "qkcone/residue.hpp"
#include "qkcone/scalar.hpp"
#include "qkcone/series.hpp"
#include "qkcone/twists.hpp"

#endif
