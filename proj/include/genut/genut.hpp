#pragma once

#include "genut/analytic.hpp"
#include "genut/errors.hpp"
#include "genut/json_io.hpp"
#include "genut/linalg.hpp"
#include "genut/moments.hpp"
#include "genut/propagation.hpp"
#include "genut/report.hpp"
#include "genut/reproduce.hpp"
#include "genut/sampling.hpp"
#include "genut/sigma_points.hpp"
#include "genut/transforms.hpp"
#include "genut/unscented.hpp"
