#include "uab/learners.hpp"

namespace uab {

LearnerSpec learner_config_for(Modality m) {
    LearnerSpec spec;
    spec.modality = m;
    switch (m) {
        case Modality::disfluency:
            spec.config.kind = NetworkKind::feedforward;
            spec.config.layer_sizes = {kDisfluencyDim, 24, 16};
            spec.config.seq_len = 1;
            break;
        case Modality::acoustic:
            spec.config.kind = NetworkKind::feedforward;
            spec.config.layer_sizes = {kPcaComponents, 16};
            spec.config.seq_len = 1;
            break;
        case Modality::interventions:
            spec.config.kind = NetworkKind::recurrent;
            spec.config.layer_sizes = {3, 16};
            spec.config.seq_len = kInterventionSteps;
            break;
    }
    return spec;
}

std::array<LearnerSpec, 3> default_learner_configs() {
    return {learner_config_for(Modality::disfluency), learner_config_for(Modality::acoustic),
            learner_config_for(Modality::interventions)};
}

std::vector<Modality> default_boost_order() {
    return {Modality::disfluency, Modality::interventions, Modality::acoustic};
}

std::vector<LearnerSpec> learner_specs_for_order(const std::vector<Modality>& order) {
    std::vector<LearnerSpec> specs;
    specs.reserve(order.size());
    for (Modality m : order) specs.push_back(learner_config_for(m));
    return specs;
}

}  // namespace uab
