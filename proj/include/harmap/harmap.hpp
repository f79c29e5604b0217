#pragma once

#include "harmap/error.hpp"
#include "harmap/scaled_complex.hpp"
#include "harmap/special.hpp"
#include "harmap/coeff_stream.hpp"
#include "harmap/evaluate.hpp"
#include "harmap/growth.hpp"
#include "harmap/univalence.hpp"
#include "harmap/gapseq.hpp"
#include "harmap/catalog.hpp"
