#pragma once

// Transcript fixtures with hand-counted feature values, shared by the unit
// and acceptance suites.

#include <array>
#include <string>

namespace uab::testing {

// 60 seconds of audio. Subject: two utterances of 15 tokens each (30 words,
// 22 distinct), one filler "uh", one incomplete token "fall-", one immediate
// repetition "sink sink", two short pauses. Interviewer: one utterance.
inline const std::string kFixtureTranscript =
    "# picture-description fixture\n"
    "#duration: 60\n"
    "SUBJ: uh the boy is climbing on the stool <pause:short> to reach the cookie jar up high\n"
    "INT: mhm tell me more\n"
    "SUBJ: the water is fall- falling over <pause:short> the sink sink edge and the mother is "
    "distracted\n";

// word, unique-word, intervention, filler, short/medium/long/total pause,
// incomplete, repetition rates (per minute), mean utterance length.
inline constexpr std::array<double, 11> kFixtureDisfluency = {
    30.0, 22.0, 1.0, 1.0, 2.0, 0.0, 0.0, 2.0, 1.0, 1.0, 15.0};

inline std::string transcript_with_utterances(int count, double duration_seconds = 90.0) {
    std::string text = "#duration: " + std::to_string(duration_seconds) + "\n";
    for (int i = 0; i < count; ++i)
        text += i % 2 == 0 ? "SUBJ: telling the story\n" : "INT: go on\n";
    return text;
}

}  // namespace uab::testing
