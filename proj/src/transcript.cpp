#include "uab/transcript.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "uab/errors.hpp"

namespace uab {

namespace {

bool is_blank(const std::string& line) {
    for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
}

std::string strip(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

constexpr const char* kDurationPrefix = "#duration:";

}  // namespace

Transcript parse_transcript(const std::string& text) {
    Transcript out;
    bool have_duration = false;

    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_blank(line)) continue;

        if (line.rfind(kDurationPrefix, 0) == 0) {
            if (have_duration)
                throw DataError("transcript line " + std::to_string(line_no) +
                                ": duplicate #duration header");
            if (!out.utterances.empty())
                throw DataError("transcript line " + std::to_string(line_no) +
                                ": #duration header must precede utterances");
            const std::string value = strip(line.substr(std::string(kDurationPrefix).size()));
            std::size_t used = 0;
            double seconds = 0.0;
            try {
                seconds = std::stod(value, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != value.size() || !(seconds > 0.0))
                throw DataError("transcript line " + std::to_string(line_no) +
                                ": invalid duration '" + value + "'");
            out.audio_duration = seconds;
            have_duration = true;
            continue;
        }
        if (line[0] == '#') continue;  // comment

        Speaker speaker;
        std::string rest;
        if (line.rfind("SUBJ:", 0) == 0) {
            speaker = Speaker::subject;
            rest = line.substr(5);
        } else if (line.rfind("INT:", 0) == 0) {
            speaker = Speaker::interviewer;
            rest = line.substr(4);
        } else {
            throw DataError("transcript line " + std::to_string(line_no) +
                            ": expected 'SUBJ:' or 'INT:' prefix");
        }

        Utterance utt;
        utt.speaker = speaker;
        std::istringstream words(rest);
        std::string token;
        while (words >> token) {
            if (token.front() == '<') {
                if (token == "<pause:short>")
                    utt.pauses.push_back(PauseClass::short_pause);
                else if (token == "<pause:medium>")
                    utt.pauses.push_back(PauseClass::medium_pause);
                else if (token == "<pause:long>")
                    utt.pauses.push_back(PauseClass::long_pause);
                else
                    throw DataError("transcript line " + std::to_string(line_no) +
                                    ": unknown mark '" + token + "'");
            } else {
                utt.tokens.push_back(token);
            }
        }
        out.utterances.push_back(std::move(utt));
    }

    if (!have_duration) throw DataError("transcript: missing #duration header");
    if (out.utterances.empty()) throw DataError("transcript: no utterances");
    return out;
}

Transcript parse_transcript_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open transcript file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        Transcript t = parse_transcript(buffer.str());
        t.subject_id = path.stem().string();
        return t;
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

}  // namespace uab
