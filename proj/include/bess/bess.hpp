#pragma once

// Numerical toolkit for Schur-complement representations of homogeneous
// positive holomorphic operator functions on products of matrix halfplanes:
// positive linear pencils and their decompositions, Cayley transforms to the
// Schur-Agler class on matrix disk products, lurking-isometry colligations,
// randomized class-membership checks, and anti-unitary real structure.

#include "bess/cayley.hpp"
#include "bess/colligation.hpp"
#include "bess/domain.hpp"
#include "bess/involution.hpp"
#include "bess/membership.hpp"
#include "bess/numkit.hpp"
#include "bess/pencil.hpp"
#include "bess/realstruct.hpp"
#include "bess/report.hpp"
#include "bess/rng.hpp"
#include "bess/sampling.hpp"
#include "bess/types.hpp"
