#ifndef QMT_SAMPLING_HPP
#define QMT_SAMPLING_HPP

#include <random>

#include "qmt/certify.hpp"
#include "qmt/distance.hpp"

namespace qmt {

Rat random_rat(std::mt19937_64& rng, int max_num = 12, int max_den = 6);
/// Random rational in [0, 1].
Rat random_unit_rat(std::mt19937_64& rng);
QVal random_qval(QuantaleKind k, std::mt19937_64& rng);

/// Random well-typed term over the theory's signature (wire widths <= 4).
Term random_term(std::mt19937_64& rng, const QuantTheory& theory, int grow_steps = 6);

/// Random valid certificate over BA: correct by construction, exercises every
/// rule admitted by the closure.
Certificate random_ba_certificate(std::mt19937_64& rng, const QuantTheory& ba, int depth);

/**
 * Flips one non-MON node's ε to a different value (strictly ⊑-below the rule's
 * conclusion when possible, above otherwise). Returns false when the
 * certificate has no mutable node.
 */
bool mutate_certificate_eps(std::mt19937_64& rng, Certificate& cert);

}  // namespace qmt

#endif
