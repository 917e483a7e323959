#pragma once

#include <array>
#include <span>
#include <vector>

#include "uab/linalg.hpp"
#include "uab/transcript.hpp"

namespace uab {

inline constexpr int kDisfluencyDim = 11;
inline constexpr int kInterventionSteps = 32;

// Eleven transcript rates. All rate features are per minute of audio; the
// mean utterance length is left unnormalized. Word-based features count
// subject tokens only, and pause features count pause marks in subject
// utterances only, so interviewer wording never leaks into the vector.
struct DisfluencyVector {
    double word_rate = 0.0;
    double unique_word_rate = 0.0;
    double intervention_rate = 0.0;  // interviewer utterances per minute
    double filler_rate = 0.0;        // "uh", "um", "er", "ah"
    double short_pause_rate = 0.0;
    double medium_pause_rate = 0.0;
    double long_pause_rate = 0.0;
    double total_pause_rate = 0.0;
    double incomplete_word_rate = 0.0;  // tokens ending in "-"
    double repetition_rate = 0.0;       // adjacent identical tokens within an utterance
    double mean_utterance_length = 0.0;

    std::array<double, kDisfluencyDim> as_array() const;
};

DisfluencyVector extract_disfluency(const Transcript& t);

enum class InterventionToken { subject, interviewer, pad };

// Per-utterance speaker sequence, truncated to its first 32 entries or padded
// with `pad` to exactly 32. Pads only ever appear as a contiguous suffix.
struct InterventionSequence {
    std::array<InterventionToken, kInterventionSteps> steps;

    bool operator==(const InterventionSequence&) const = default;
};

InterventionSequence extract_interventions(const Transcript& t);

// Column-wise min-max scaling to [0,1] with extrema taken from the fit
// matrix only. Constant columns map to zero.
struct MinMaxScaler {
    std::vector<double> mins;
    std::vector<double> maxs;

    static MinMaxScaler fit(const Matrix& train);
    std::vector<double> transform(std::span<const double> row) const;
    Matrix transform(const Matrix& rows) const;
};

}  // namespace uab
