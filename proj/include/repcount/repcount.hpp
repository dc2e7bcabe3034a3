#pragma once

// Umbrella header for the repetition-counting library.

#include "repcount/dataset.hpp"
#include "repcount/engine.hpp"
#include "repcount/errors.hpp"
#include "repcount/metrics.hpp"
#include "repcount/npy.hpp"
#include "repcount/similarity.hpp"
#include "repcount/spectral.hpp"
#include "repcount/synthetic.hpp"
#include "repcount/types.hpp"
