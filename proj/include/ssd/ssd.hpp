#pragma once

// Umbrella header.

#include "ssd/combinat.hpp"
#include "ssd/document.hpp"
#include "ssd/duality.hpp"
#include "ssd/geom.hpp"
#include "ssd/hull.hpp"
#include "ssd/ltype.hpp"
#include "ssd/polytope.hpp"
#include "ssd/reconstruct.hpp"
#include "ssd/search.hpp"
#include "ssd/verify.hpp"
