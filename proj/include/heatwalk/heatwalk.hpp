#pragma once

#include "heatwalk/boundary.hpp"
#include "heatwalk/charfn.hpp"
#include "heatwalk/cyclotomic.hpp"
#include "heatwalk/errors.hpp"
#include "heatwalk/io.hpp"
#include "heatwalk/model.hpp"
#include "heatwalk/numeric.hpp"
#include "heatwalk/rng.hpp"
#include "heatwalk/solver.hpp"
#include "heatwalk/spectral.hpp"
#include "heatwalk/step.hpp"
#include "heatwalk/version.hpp"
#include "heatwalk/walk.hpp"
