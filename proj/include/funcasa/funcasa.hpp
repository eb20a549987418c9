#pragma once

#include "funcasa/asa.hpp"
#include "funcasa/bodies.hpp"
#include "funcasa/check.hpp"
#include "funcasa/citations.hpp"
#include "funcasa/duality.hpp"
#include "funcasa/errors.hpp"
#include "funcasa/extremal.hpp"
#include "funcasa/linalg.hpp"
#include "funcasa/moments.hpp"
#include "funcasa/parallel.hpp"
#include "funcasa/quadrature.hpp"
#include "funcasa/sampling.hpp"
#include "funcasa/sconcave.hpp"
#include "funcasa/serialize.hpp"
#include "funcasa/support.hpp"
#include "funcasa/verify.hpp"
