#pragma once

#include "catalog.hpp"
#include "classes.hpp"
#include "equations.hpp"
#include "graphs.hpp"
#include "indicator.hpp"
#include "pipeline.hpp"
#include "sieve.hpp"
#include "signature.hpp"
#include "symmetry.hpp"
