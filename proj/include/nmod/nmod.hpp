#pragma once

#include "nmod/clustering.hpp"
#include "nmod/eigensolver.hpp"
#include "nmod/error.hpp"
#include "nmod/generators.hpp"
#include "nmod/graph.hpp"
#include "nmod/quality.hpp"
#include "nmod/regularity.hpp"
#include "nmod/rng.hpp"
#include "nmod/sampling.hpp"
#include "nmod/spectral.hpp"
