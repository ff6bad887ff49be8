#pragma once

#include "riemobs/catalog.hpp"
#include "riemobs/conditions.hpp"
#include "riemobs/dual.hpp"
#include "riemobs/errors.hpp"
#include "riemobs/gap.hpp"
#include "riemobs/geodesic.hpp"
#include "riemobs/geometry.hpp"
#include "riemobs/linalg.hpp"
#include "riemobs/metric_construction.hpp"
#include "riemobs/metric_field.hpp"
#include "riemobs/observer.hpp"
#include "riemobs/polynomial.hpp"
#include "riemobs/recipe.hpp"
#include "riemobs/region.hpp"
#include "riemobs/smooth_map.hpp"
