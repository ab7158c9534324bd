#include <chrono>
#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "dualmind/uci.hpp"

using namespace dualmind;

namespace {

std::string fixture_path(const char* env) {
    const char* v = std::getenv(env);
    REQUIRE(v != nullptr);
    return v;
}

// Thread-safe capture of everything the session emits.
class CaptureBuf : public std::streambuf {
public:
    std::string snapshot() {
        std::lock_guard lock(mutex_);
        return data_;
    }

protected:
    int_type overflow(int_type c) override {
        if (c != traits_type::eof()) {
            std::lock_guard lock(mutex_);
            data_.push_back(traits_type::to_char_type(c));
        }
        return c;
    }
    std::streamsize xsputn(const char* s, std::streamsize n) override {
        std::lock_guard lock(mutex_);
        data_.append(s, static_cast<std::size_t>(n));
        return n;
    }

private:
    std::mutex mutex_;
    std::string data_;
};

// One scripted command; when wait_bestmoves >= 0, the line is withheld
// until that many bestmove lines have been emitted, which makes searches
// deterministic without real pipes.
struct Step {
    std::string line;
    int wait_bestmoves = -1;
};

int count_bestmoves(const std::string& text) {
    int n = 0;
    std::size_t pos = 0;
    while ((pos = text.find("bestmove ", pos)) != std::string::npos) {
        ++n;
        pos += 9;
    }
    return n;
}

class ScriptedBuf : public std::streambuf {
public:
    ScriptedBuf(std::vector<Step> steps, CaptureBuf& out)
        : steps_(std::move(steps)), out_(out) {}

protected:
    int_type underflow() override {
        if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
        if (next_ >= steps_.size()) return traits_type::eof();
        const Step& step = steps_[next_++];
        if (step.wait_bestmoves >= 0) {
            auto deadline =
                std::chrono::steady_clock::now() + std::chrono::seconds(60);
            while (count_bestmoves(out_.snapshot()) < step.wait_bestmoves) {
                REQUIRE(std::chrono::steady_clock::now() < deadline);
                std::this_thread::sleep_for(std::chrono::milliseconds(1));
            }
        }
        current_ = step.line + "\n";
        setg(current_.data(), current_.data(),
             current_.data() + current_.size());
        return traits_type::to_int_type(*gptr());
    }

private:
    std::vector<Step> steps_;
    std::size_t next_ = 0;
    std::string current_;
    CaptureBuf& out_;
};

// Runs a full scripted session against the in-process server and returns
// the emitted lines.
std::vector<std::string> run_session(const std::vector<Step>& steps,
                                     const std::string& engine = "ab") {
    CaptureBuf capture;
    ScriptedBuf script(steps, capture);
    std::istream in(&script);
    std::ostream out(&capture);
    {
        UciSession session(in, out, engine);
        CHECK(session.run() == 0);
    }
    std::vector<std::string> lines;
    std::istringstream split(capture.snapshot());
    std::string line;
    while (std::getline(split, line)) lines.push_back(line);
    return lines;
}

int count_prefix(const std::vector<std::string>& lines, const std::string& p) {
    int n = 0;
    for (const auto& l : lines)
        if (l.rfind(p, 0) == 0) ++n;
    return n;
}

}  // namespace

TEST_CASE("info lines round-trip through format and parse") {
    std::vector<UciInfoLine> cases;
    UciInfoLine a;
    a.depth = 7;
    a.multipv = 1;
    a.score = Score::cp(-133);
    a.nodes = 123456;
    a.nps = 1000000;
    a.time_ms = 123;
    a.pv = {*move_from_uci("e2e4"), *move_from_uci("e7e5"),
            *move_from_uci("g1f3")};
    cases.push_back(a);

    UciInfoLine b;
    b.depth = 12;
    b.multipv = 3;
    b.score = Score::mate_in(-4);
    b.nodes = 1;
    b.pv = {*move_from_uci("d7d8n")};
    cases.push_back(b);

    UciInfoLine c;
    c.score = Score::mate_in(15);
    cases.push_back(c);

    for (const auto& info : cases) {
        auto parsed = parse_info_line(format_info_line(info));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == info);
    }

    CHECK(format_info_line(a) ==
          "info depth 7 multipv 1 score cp -133 nodes 123456 nps 1000000 "
          "time 123 pv e2e4 e7e5 g1f3");
}

TEST_CASE("parse_info_line rejects everything else") {
    CHECK(!parse_info_line("bestmove e2e4"));
    CHECK(!parse_info_line(""));
    CHECK(!parse_info_line("info"));
    CHECK(!parse_info_line("info string warming up"));
    CHECK(!parse_info_line("readyok"));
    CHECK(!parse_info_line("info depth banana"));
    // Unknown keys are skipped, modeled ones still land.
    auto p = parse_info_line(
        "info depth 3 seldepth 9 score cp 10 hashfull 42 pv e2e4");
    REQUIRE(p.has_value());
    CHECK(p->depth == 3);
    CHECK(p->score == Score::cp(10));
    REQUIRE(p->pv.size() == 1);
}

TEST_CASE("scripted session: handshake, search, single bestmove") {
    auto lines = run_session({{"uci"},
                              {"isready"},
                              {"position fen 7k/8/8/8/8/8/R7/1R5K w - - 0 1"},
                              {"go depth 5"},
                              {"quit", 1}});
    CHECK(count_prefix(lines, "id name DualMind") == 1);
    CHECK(count_prefix(lines, "uciok") == 1);
    CHECK(count_prefix(lines, "readyok") == 1);
    CHECK(count_prefix(lines, "info depth ") >= 3);
    REQUIRE(count_prefix(lines, "bestmove ") == 1);
    // Depth 5 proves the mate; the final info line carries it.
    bool saw_mate = false;
    for (const auto& l : lines)
        if (l.rfind("info depth ", 0) == 0 &&
            l.find("score mate 2") != std::string::npos)
            saw_mate = true;
    CHECK(saw_mate);
}

TEST_CASE("scripted session: no bestmove without go") {
    auto lines = run_session({{"uci"},
                              {"isready"},
                              {"position startpos moves e2e4 e7e5"},
                              {"quit"}});
    CHECK(count_prefix(lines, "bestmove ") == 0);
}

TEST_CASE("scripted session: multipv option widens info output") {
    auto lines = run_session({{"uci"},
                              {"setoption name MultiPV value 3"},
                              {"position startpos"},
                              {"go depth 3"},
                              {"quit", 1}});
    CHECK(count_prefix(lines, "bestmove ") == 1);
    int rank3 = 0;
    for (const auto& l : lines)
        if (l.find(" multipv 3 ") != std::string::npos) ++rank3;
    CHECK(rank3 >= 1);
}

TEST_CASE("scripted session: terminal position answers bestmove 0000") {
    auto lines = run_session({{"position fen 7k/6Q1/6K1/8/8/8/8/8 b - - 0 1"},
                              {"go depth 3"},
                              {"quit", 1}});
    REQUIRE(count_prefix(lines, "bestmove ") == 1);
    CHECK(count_prefix(lines, "bestmove 0000") == 1);
}

TEST_CASE("scripted session: stop ends an infinite search") {
    auto lines = run_session({{"position startpos"},
                              {"go infinite"},
                              {"stop"},
                              {"quit", 1}});
    CHECK(count_prefix(lines, "bestmove ") == 1);
}

TEST_CASE("scripted session: mcts engine serves too") {
    auto lines = run_session({{"uci"},
                              {"position startpos"},
                              {"go nodes 300"},
                              {"quit", 1}},
                             "mcts");
    CHECK(count_prefix(lines, "id name DualMind mcts") == 1);
    CHECK(count_prefix(lines, "info depth ") >= 2);
    CHECK(count_prefix(lines, "bestmove ") == 1);
}

TEST_CASE("scripted session: malformed input never kills the loop") {
    std::mt19937 rng(20260823);
    std::vector<Step> steps;
    const std::string alphabet =
        "abcdefghijklmnopqrstuvwxyz0123456789 -=/\\\"";
    for (int i = 0; i < 200; ++i) {
        std::string junk;
        int len = static_cast<int>(rng() % 40);
        for (int k = 0; k < len; ++k)
            junk += alphabet[rng() % alphabet.size()];
        steps.push_back({junk});
    }
    steps.push_back({"position fen not a real fen"});
    steps.push_back({"position startpos moves e9x9"});
    steps.push_back({"go depth notanumber"});
    steps.push_back({"setoption name Bogus value 7"});
    steps.push_back({"go depth 2"});
    steps.push_back({"quit", 1});
    auto lines = run_session(steps);
    CHECK(count_prefix(lines, "bestmove ") >= 1);
}

TEST_CASE("client parses a canned engine transcript") {
    UciClient client(fixture_path("DUALMIND_FAKE_ENGINE"));
    CHECK(client.engine_name() == "FakeFish 0.1");

    std::vector<SearchResult> iterations;
    SearchLimits limits;
    limits.max_depth = 3;
    SearchResult r = client.go(Position::startpos(), limits,
                               [&](const SearchResult& it) {
                                   iterations.push_back(it);
                               });
    REQUIRE(iterations.size() == 3);
    CHECK(iterations[0].nominal_depth == 1);
    CHECK(iterations[0].lines.size() == 1);
    CHECK(iterations[1].nominal_depth == 2);
    REQUIRE(iterations[1].lines.size() == 2);
    CHECK(to_uci(iterations[1].lines[0].move) == "e2e4");
    CHECK(to_uci(iterations[1].lines[1].move) == "d2d4");
    CHECK(iterations[1].lines[1].score == Score::cp(20));

    CHECK(r.nominal_depth == 3);
    REQUIRE(r.lines.size() == 1);
    CHECK(to_uci(r.lines.front().move) == "e2e4");
    CHECK(r.lines.front().score == Score::mate_in(4));
    CHECK(r.nodes == 9000);
    CHECK(r.elapsed_ms == 100);
    REQUIRE(r.lines.front().pv.size() == 3);
    client.quit();
}

TEST_CASE("client rejects a missing binary") {
    CHECK_THROWS_AS(UciClient("/nonexistent/engine"), UciError);
}

TEST_CASE("client loopback against the bundled server") {
    UciClient client(fixture_path("DUALMIND_SERVE_AB"),
                     {{"MultiPV", "2"}, {"TTSizeMiB", "16"}});
    CHECK(client.engine_name() == "DualMind ab");
    client.new_game();

    SearchLimits limits;
    limits.max_depth = 5;
    SearchResult r = client.go(
        Position::from_fen("7k/8/8/8/8/8/R7/1R5K w - - 0 1"), limits, nullptr);
    REQUIRE(r.lines.size() == 2);
    CHECK(r.lines[0].score == Score::mate_in(2));
    CHECK(r.lines[1].score == Score::mate_in(2));
    CHECK(!(r.lines[0].move == r.lines[1].move));

    // An unlimited go turns into `go infinite`; stop must end it promptly.
    std::thread stopper([&] {
        std::this_thread::sleep_for(std::chrono::milliseconds(200));
        client.stop();
    });
    auto t0 = std::chrono::steady_clock::now();
    SearchResult inf = client.go(Position::startpos(), SearchLimits{}, nullptr);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    stopper.join();
    CHECK(!inf.lines.empty());
    CHECK(ms < 5000);
    client.quit();
}
