#ifndef QUANTLAB_QUANTLAB_HPP_
#define QUANTLAB_QUANTLAB_HPP_

#include "quantlab/basis.hpp"
#include "quantlab/codec.hpp"
#include "quantlab/errors.hpp"
#include "quantlab/geometry.hpp"
#include "quantlab/io.hpp"
#include "quantlab/norms.hpp"
#include "quantlab/parallel.hpp"
#include "quantlab/projection.hpp"
#include "quantlab/rng.hpp"
#include "quantlab/scaling.hpp"

#endif  // QUANTLAB_QUANTLAB_HPP_
