#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace uab {

enum class Speaker { subject, interviewer };
enum class PauseClass { short_pause, medium_pause, long_pause };

struct Utterance {
    Speaker speaker = Speaker::subject;
    std::vector<std::string> tokens;
    std::vector<PauseClass> pauses;  // pause marks that occurred inside this utterance
};

struct Transcript {
    std::string subject_id;
    double audio_duration = 0.0;  // seconds
    std::vector<Utterance> utterances;
};

// Parses the plain transcript format:
//   - `#` starts a comment line, except the mandatory `#duration: <seconds>`
//     header which must appear before the first utterance
//   - utterance lines are `SUBJ: ...` or `INT: ...` with whitespace-separated
//     tokens and inline pause marks `<pause:short|medium|long>`
//   - blank lines are ignored
// Malformed lines raise DataError naming the line number. subject_id is left
// empty; parse_transcript_file fills it from the file stem.
Transcript parse_transcript(const std::string& text);
Transcript parse_transcript_file(const std::filesystem::path& path);

}  // namespace uab
