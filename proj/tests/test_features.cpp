#include <doctest.h>

#include "fixtures.hpp"
#include "uab/errors.hpp"
#include "uab/features.hpp"
#include "uab/transcript.hpp"

using namespace uab;
using namespace uab::testing;

TEST_CASE("fixture transcript parses into the expected structure") {
    const Transcript t = parse_transcript(kFixtureTranscript);
    CHECK(t.audio_duration == 60.0);
    REQUIRE(t.utterances.size() == 3);
    CHECK(t.utterances[0].speaker == Speaker::subject);
    CHECK(t.utterances[0].tokens.size() == 15);
    CHECK(t.utterances[0].pauses.size() == 1);
    CHECK(t.utterances[1].speaker == Speaker::interviewer);
    CHECK(t.utterances[2].tokens.size() == 15);
}

TEST_CASE("single-utterance example from the format docs") {
    const Transcript t =
        parse_transcript("#duration: 60\nSUBJ: the boy <pause:short> is falling\n");
    REQUIRE(t.utterances.size() == 1);
    CHECK(t.utterances[0].speaker == Speaker::subject);
    CHECK(t.utterances[0].tokens.size() == 4);
    REQUIRE(t.utterances[0].pauses.size() == 1);
    CHECK(t.utterances[0].pauses[0] == PauseClass::short_pause);
}

TEST_CASE("transcript parse errors") {
    CHECK_THROWS_WITH_AS(parse_transcript("#duration: 60\n"), doctest::Contains("no utterances"),
                         DataError);
    CHECK_THROWS_WITH_AS(parse_transcript("SUBJ: hello\n"), doctest::Contains("duration"),
                         DataError);
    CHECK_THROWS_WITH_AS(parse_transcript("#duration: 60\nBAD LINE\n"),
                         doctest::Contains("line 2"), DataError);
    CHECK_THROWS_WITH_AS(parse_transcript("#duration: 60\nSUBJ: a <pause:huge> b\n"),
                         doctest::Contains("line 2"), DataError);
    CHECK_THROWS_AS(parse_transcript("#duration: -5\nSUBJ: a\n"), DataError);
    CHECK_THROWS_AS(parse_transcript("#duration: 60\n#duration: 60\nSUBJ: a\n"), DataError);
}

TEST_CASE("utterance order is preserved") {
    std::string text = "#duration: 120\n";
    for (int i = 0; i < 3; ++i) text += "SUBJ: one two\nINT: three\n";
    const Transcript t = parse_transcript(text);
    REQUIRE(t.utterances.size() == 6);
    for (int i = 0; i < 6; ++i)
        CHECK(t.utterances[i].speaker ==
              (i % 2 == 0 ? Speaker::subject : Speaker::interviewer));
}

TEST_CASE("disfluency vector matches the hand-counted fixture") {
    const auto v = extract_disfluency(parse_transcript(kFixtureTranscript)).as_array();
    for (std::size_t i = 0; i < v.size(); ++i) {
        CAPTURE(i);
        CHECK(v[i] == doctest::Approx(kFixtureDisfluency[i]).epsilon(1e-12));
    }
}

TEST_CASE("pause-free transcript zeroes features 5 through 8") {
    const auto v =
        extract_disfluency(parse_transcript("#duration: 60\nSUBJ: all smooth speech here\n"));
    CHECK(v.short_pause_rate == 0.0);
    CHECK(v.medium_pause_rate == 0.0);
    CHECK(v.long_pause_rate == 0.0);
    CHECK(v.total_pause_rate == 0.0);
}

TEST_CASE("doubling the duration halves every rate but not utterance length") {
    const auto base = extract_disfluency(parse_transcript(kFixtureTranscript)).as_array();
    std::string doubled = kFixtureTranscript;
    doubled.replace(doubled.find("#duration: 60"), 13, "#duration: 120");
    const auto halved = extract_disfluency(parse_transcript(doubled)).as_array();
    for (std::size_t i = 0; i + 1 < base.size(); ++i)
        CHECK(halved[i] == doctest::Approx(base[i] / 2.0).epsilon(1e-12));
    CHECK(halved.back() == base.back());
}

TEST_CASE("interviewer wording never changes the vector") {
    std::string chatty = kFixtureTranscript;
    chatty.replace(chatty.find("INT: mhm tell me more"), 21,
                   "INT: uh um er ah words words <pause:long> fall-");
    const auto a = extract_disfluency(parse_transcript(kFixtureTranscript)).as_array();
    const auto b = extract_disfluency(parse_transcript(chatty)).as_array();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("intervention sequences pad, truncate, and hold at the boundary") {
    auto count_pads = [](const InterventionSequence& s) {
        int pads = 0;
        for (auto tok : s.steps) pads += tok == InterventionToken::pad;
        return pads;
    };

    const auto six = extract_interventions(parse_transcript(transcript_with_utterances(6)));
    CHECK(count_pads(six) == 26);
    CHECK(six.steps[0] == InterventionToken::subject);
    CHECK(six.steps[1] == InterventionToken::interviewer);
    CHECK(six.steps[5] == InterventionToken::interviewer);
    CHECK(six.steps[6] == InterventionToken::pad);

    const auto forty = extract_interventions(parse_transcript(transcript_with_utterances(40)));
    CHECK(count_pads(forty) == 0);
    // truncation keeps the first 32 utterances
    CHECK(forty.steps[31] == InterventionToken::interviewer);

    for (int n : {31, 32, 33}) {
        const auto seq = extract_interventions(parse_transcript(transcript_with_utterances(n)));
        CHECK(count_pads(seq) == (n < 32 ? 32 - n : 0));
        // pads only as a contiguous suffix
        bool seen_pad = false;
        for (auto tok : seq.steps) {
            if (tok == InterventionToken::pad) seen_pad = true;
            else CHECK(!seen_pad);
        }
    }
}

TEST_CASE("min-max scaler maps the fit matrix into [0,1] and kills constants") {
    Matrix m(3, 2);
    m(0, 0) = 2.0; m(0, 1) = 7.0;
    m(1, 0) = 4.0; m(1, 1) = 7.0;
    m(2, 0) = 6.0; m(2, 1) = 7.0;
    const auto scaler = MinMaxScaler::fit(m);
    const Matrix scaled = scaler.transform(m);
    CHECK(scaled(0, 0) == 0.0);
    CHECK(scaled(1, 0) == 0.5);
    CHECK(scaled(2, 0) == 1.0);
    for (int i = 0; i < 3; ++i) CHECK(scaled(i, 1) == 0.0);  // constant column

    // out-of-range rows extrapolate linearly rather than clamp
    CHECK(scaler.transform(std::vector<double>{8.0, 7.0})[0] == doctest::Approx(1.5));
}
