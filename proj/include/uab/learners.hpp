#pragma once

#include <array>
#include <vector>

#include "uab/dataset.hpp"
#include "uab/network.hpp"

namespace uab {

struct LearnerSpec {
    Modality modality = Modality::disfluency;
    NetworkConfig config;
};

// The three base-learner architectures, one per modality:
//   disfluency:    11 -> 24 relu -> 16 relu -> Gaussian head
//   acoustic:      21 -> 16 relu -> Gaussian head
//   interventions: 32-step one-hot (subject/interviewer/pad) -> tanh
//                  recurrent cell, hidden 16, final state -> Gaussian head
std::array<LearnerSpec, 3> default_learner_configs();

LearnerSpec learner_config_for(Modality m);

// Default boosting order, ascending individual test error:
// disfluency, interventions, acoustic.
std::vector<Modality> default_boost_order();

std::vector<LearnerSpec> learner_specs_for_order(const std::vector<Modality>& order);

}  // namespace uab
