#pragma once
// Convenience include for the whole library.

#include "segmap/boundary.hpp"
#include "segmap/chordarc.hpp"
#include "segmap/cli.hpp"
#include "segmap/energy.hpp"
#include "segmap/geometry.hpp"
#include "segmap/harmonic.hpp"
#include "segmap/io.hpp"
#include "segmap/numerics.hpp"
#include "segmap/pipeline.hpp"
