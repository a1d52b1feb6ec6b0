#pragma once

#include <array>
#include <cstdint>

#include "sdqc/conversation.hpp"

namespace sdqc {

// Planted generative process: labels flow down each tree through a
// transition matrix; text is emitted from label-conditioned vocabularies so
// the local features carry signal, and the punctuation/negation/picture
// habits of each stance are imitated with tunable strength.
struct SyntheticSpec {
  int events = 8;
  int trees_per_event = 30;
  int max_depth = 4;
  int max_children = 3;
  double branch_prob = 0.55;  // per child slot, damped with depth

  std::array<double, kNumLabels> root_probs{0.50, 0.12, 0.08, 0.30};
  // Rows = parent label; defaults strongly diagonal.
  std::array<std::array<double, kNumLabels>, kNumLabels> transitions{{
      {0.70, 0.10, 0.10, 0.10},
      {0.10, 0.70, 0.10, 0.10},
      {0.10, 0.10, 0.70, 0.10},
      {0.10, 0.10, 0.10, 0.70},
  }};

  int shared_vocab = 150;
  int label_vocab = 30;
  double signal_prob = 0.55;    // token drawn from the label vocabulary
  double question_prob = 0.85;  // querying tweet ends in '?'
  double negation_prob = 0.70;  // denying tweet contains a negation word
  double picture_prob = 0.35;   // supporting source carries a picture
  double url_prob = 0.30;       // supporting tweet links evidence
  int min_tokens = 5;
  int max_tokens = 12;

  std::uint64_t seed = 1;
};

// Deterministic per seed; every tweet carries a gold label. Throws
// InvalidSpec on out-of-range parameters.
RumourDataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace sdqc
