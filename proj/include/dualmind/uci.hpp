#pragma once

#include <iosfwd>
#include <mutex>
#include <thread>

#include "dualmind/bench.hpp"

namespace dualmind {

struct UciError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One engine "info" line as modeled by the harness; serialize and parse are
// mutually inverse on these fields.
struct UciInfoLine {
    int depth = 0;
    int multipv = 1;
    Score score = Score::cp(0);
    std::uint64_t nodes = 0;
    std::uint64_t nps = 0;
    std::int64_t time_ms = 0;
    std::vector<Move> pv;

    bool operator==(const UciInfoLine&) const = default;
};

std::string format_info_line(const UciInfoLine& info);
// Returns nullopt if the line is not an info line or carries none of the
// modeled fields.
std::optional<UciInfoLine> parse_info_line(const std::string& line);

// Serves an internal engine over the UCI text protocol. Reader loop on the
// calling thread, searches on a worker; stop lands within a millisecond of
// a node boundary. Protocol chatter goes to `out`, warnings to stderr.
class UciSession {
public:
    UciSession(std::istream& in, std::ostream& out,
               const std::string& engine_name);
    ~UciSession();

    int run();  // returns once quit or EOF is seen

private:
    void handle_line(const std::string& line);
    void cmd_position(const std::vector<std::string>& tokens);
    void cmd_go(const std::vector<std::string>& tokens);
    void cmd_setoption(const std::vector<std::string>& tokens);
    void finish_search();
    void interrupt_search();
    void emit(const std::string& line);

    std::istream& in_;
    std::ostream& out_;
    std::string name_;
    std::unique_ptr<EngineHandle> engine_;
    Position position_ = Position::startpos();
    std::vector<std::uint64_t> history_;
    int multipv_ = 1;
    bool identified_ = false;

    std::mutex out_mutex_;
    std::thread worker_;
    std::atomic<bool> searching_{false};
};

// Drives an external UCI engine process.
class UciClient {
public:
    UciClient(const std::string& path,
              const std::vector<std::pair<std::string, std::string>>& options = {},
              int handshake_timeout_ms = 10000);
    ~UciClient();

    UciClient(const UciClient&) = delete;
    UciClient& operator=(const UciClient&) = delete;

    const std::string& engine_name() const { return engine_name_; }

    void new_game();
    // Sends position + go, streams parsed iterations, returns the final one
    // (bestmove included as the head of the first line).
    SearchResult go(const Position& p, const SearchLimits& limits,
                    const AlphaBetaSearcher::IterationCallback& on_iteration);
    void stop();
    void quit();

private:
    void send(const std::string& line);
    std::optional<std::string> read_line(int timeout_ms);
    void handshake(
        const std::vector<std::pair<std::string, std::string>>& options,
        int timeout_ms);

    int pid_ = -1;
    int to_engine_ = -1;
    int from_engine_ = -1;
    std::string buffer_;
    std::string engine_name_;
    std::mutex send_mutex_;
};

}  // namespace dualmind
