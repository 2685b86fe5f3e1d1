#pragma once

// Umbrella header: geometry of the disk, measures and Carleson sweeps, point
// sequences, spectral margins, closed-range diagnostics, and file formats.

#include "disklab/disk.hpp"
#include "disklab/measures.hpp"
#include "disklab/sequences.hpp"
#include "disklab/spectral.hpp"
#include "disklab/diagnostics.hpp"
#include "disklab/io.hpp"
