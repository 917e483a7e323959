#include "uab/features.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>
#include <string>

namespace uab {

namespace {

std::string lowercase(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_filler(const std::string& token) {
    const std::string t = lowercase(token);
    return t == "uh" || t == "um" || t == "er" || t == "ah";
}

}  // namespace

std::array<double, kDisfluencyDim> DisfluencyVector::as_array() const {
    return {word_rate,       unique_word_rate,  intervention_rate,    filler_rate,
            short_pause_rate, medium_pause_rate, long_pause_rate,      total_pause_rate,
            incomplete_word_rate, repetition_rate, mean_utterance_length};
}

DisfluencyVector extract_disfluency(const Transcript& t) {
    if (!(t.audio_duration > 0.0))
        throw std::invalid_argument("extract_disfluency: audio_duration must be positive");
    const double minutes = t.audio_duration / 60.0;

    std::size_t words = 0;
    std::set<std::string> unique_words;
    std::size_t interventions = 0;
    std::size_t fillers = 0;
    std::size_t short_pauses = 0, medium_pauses = 0, long_pauses = 0;
    std::size_t incomplete = 0;
    std::size_t repetitions = 0;
    std::size_t subject_utterances = 0;

    for (const Utterance& utt : t.utterances) {
        if (utt.speaker == Speaker::interviewer) {
            ++interventions;
            continue;
        }
        ++subject_utterances;
        words += utt.tokens.size();
        for (std::size_t i = 0; i < utt.tokens.size(); ++i) {
            const std::string& tok = utt.tokens[i];
            unique_words.insert(tok);
            if (is_filler(tok)) ++fillers;
            if (!tok.empty() && tok.back() == '-') ++incomplete;
            if (i > 0 && tok == utt.tokens[i - 1]) ++repetitions;
        }
        for (PauseClass p : utt.pauses) {
            switch (p) {
                case PauseClass::short_pause: ++short_pauses; break;
                case PauseClass::medium_pause: ++medium_pauses; break;
                case PauseClass::long_pause: ++long_pauses; break;
            }
        }
    }

    DisfluencyVector v;
    v.word_rate = static_cast<double>(words) / minutes;
    v.unique_word_rate = static_cast<double>(unique_words.size()) / minutes;
    v.intervention_rate = static_cast<double>(interventions) / minutes;
    v.filler_rate = static_cast<double>(fillers) / minutes;
    v.short_pause_rate = static_cast<double>(short_pauses) / minutes;
    v.medium_pause_rate = static_cast<double>(medium_pauses) / minutes;
    v.long_pause_rate = static_cast<double>(long_pauses) / minutes;
    v.total_pause_rate = static_cast<double>(short_pauses + medium_pauses + long_pauses) / minutes;
    v.incomplete_word_rate = static_cast<double>(incomplete) / minutes;
    v.repetition_rate = static_cast<double>(repetitions) / minutes;
    v.mean_utterance_length = subject_utterances == 0
                                  ? 0.0
                                  : static_cast<double>(words) / subject_utterances;
    return v;
}

InterventionSequence extract_interventions(const Transcript& t) {
    InterventionSequence seq;
    seq.steps.fill(InterventionToken::pad);
    const std::size_t count = std::min<std::size_t>(t.utterances.size(), kInterventionSteps);
    for (std::size_t i = 0; i < count; ++i)
        seq.steps[i] = t.utterances[i].speaker == Speaker::subject
                           ? InterventionToken::subject
                           : InterventionToken::interviewer;
    return seq;
}

MinMaxScaler MinMaxScaler::fit(const Matrix& train) {
    if (train.rows == 0 || train.cols == 0)
        throw std::invalid_argument("MinMaxScaler::fit: empty matrix");
    MinMaxScaler s;
    s.mins.assign(train.cols, 0.0);
    s.maxs.assign(train.cols, 0.0);
    for (std::size_t j = 0; j < train.cols; ++j) {
        double lo = train(0, j), hi = train(0, j);
        for (std::size_t i = 1; i < train.rows; ++i) {
            lo = std::min(lo, train(i, j));
            hi = std::max(hi, train(i, j));
        }
        s.mins[j] = lo;
        s.maxs[j] = hi;
    }
    return s;
}

std::vector<double> MinMaxScaler::transform(std::span<const double> row) const {
    if (row.size() != mins.size())
        throw std::invalid_argument("MinMaxScaler::transform: dimension mismatch");
    std::vector<double> out(row.size(), 0.0);
    for (std::size_t j = 0; j < row.size(); ++j) {
        const double span = maxs[j] - mins[j];
        out[j] = span > 0.0 ? (row[j] - mins[j]) / span : 0.0;
    }
    return out;
}

Matrix MinMaxScaler::transform(const Matrix& rows) const {
    Matrix out(rows.rows, rows.cols);
    for (std::size_t i = 0; i < rows.rows; ++i) {
        const auto scaled = transform(rows.row(i));
        std::copy(scaled.begin(), scaled.end(), out.row(i).begin());
    }
    return out;
}

}  // namespace uab
