#pragma once

// Static SVG figures: cell diagrams of three-outcome properties and link
// envelopes of two-dimensional surrogates.

#include "forge/link.hpp"
#include "forge/simplex_core.hpp"

#include <string>

namespace forge {

/// Barycentric drawing of the level sets of a loss on three outcomes, one
/// colored polygon per full-dimensional cell. Throws std::invalid_argument
/// unless the loss has exactly three outcomes.
std::string simplex_cell_svg(const DiscreteLoss& loss, const std::string& title);

/// Regions of [lo, hi]^2 by the value of Psi(u), sampled at cell centers of
/// the given resolution, with embedding points drawn bold. Throws
/// std::invalid_argument unless the link lives in two dimensions.
std::string envelope_svg(const Link& link, const Rational& lo, const Rational& hi, const Rational& resolution,
                         const std::string& title);

}  // namespace forge
