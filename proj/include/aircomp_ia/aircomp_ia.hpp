#pragma once

// Umbrella header.

#include "aircomp_ia/alignment.hpp"
#include "aircomp_ia/channel.hpp"
#include "aircomp_ia/config.hpp"
#include "aircomp_ia/csv.hpp"
#include "aircomp_ia/dense.hpp"
#include "aircomp_ia/errors.hpp"
#include "aircomp_ia/exact_linalg.hpp"
#include "aircomp_ia/float_linalg.hpp"
#include "aircomp_ia/harness.hpp"
#include "aircomp_ia/oracles.hpp"
#include "aircomp_ia/parallel.hpp"
#include "aircomp_ia/precoding.hpp"
#include "aircomp_ia/rng.hpp"
#include "aircomp_ia/scalar.hpp"
#include "aircomp_ia/topology.hpp"
#include "aircomp_ia/transceiver.hpp"
