#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstring>
#include <map>
#include <sstream>

#include "dualmind/uci.hpp"

namespace dualmind {

UciClient::UciClient(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& options,
    int handshake_timeout_ms) {
    if (::access(path.c_str(), X_OK) != 0)
        throw UciError("engine binary not executable: " + path);

    int to_child[2], from_child[2];
    if (::pipe(to_child) != 0 || ::pipe(from_child) != 0)
        throw UciError("pipe failed");

    pid_ = ::fork();
    if (pid_ < 0) throw UciError("fork failed");
    if (pid_ == 0) {
        ::dup2(to_child[0], STDIN_FILENO);
        ::dup2(from_child[1], STDOUT_FILENO);
        ::close(to_child[0]);
        ::close(to_child[1]);
        ::close(from_child[0]);
        ::close(from_child[1]);
        ::execl(path.c_str(), path.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    to_engine_ = to_child[1];
    from_engine_ = from_child[0];

    try {
        handshake(options, handshake_timeout_ms);
    } catch (...) {
        quit();
        throw;
    }
}

UciClient::~UciClient() { quit(); }

void UciClient::send(const std::string& line) {
    std::lock_guard lock(send_mutex_);
    std::string data = line + "\n";
    ssize_t n = ::write(to_engine_, data.data(), data.size());
    if (n != static_cast<ssize_t>(data.size()))
        throw UciError("engine pipe write failed");
}

std::optional<std::string> UciClient::read_line(int timeout_ms) {
    for (;;) {
        auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        struct pollfd pfd{from_engine_, POLLIN, 0};
        int rc = ::poll(&pfd, 1, timeout_ms);
        if (rc == 0) return std::nullopt;  // timeout
        if (rc < 0) throw UciError("poll failed");
        char chunk[4096];
        ssize_t n = ::read(from_engine_, chunk, sizeof chunk);
        if (n <= 0) throw UciError("engine closed its output");
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

void UciClient::handshake(
    const std::vector<std::pair<std::string, std::string>>& options,
    int timeout_ms) {
    send("uci");
    for (;;) {
        auto line = read_line(timeout_ms);
        if (!line) throw UciError("handshake timeout waiting for uciok");
        if (line->rfind("id name ", 0) == 0) engine_name_ = line->substr(8);
        if (*line == "uciok") break;
    }
    for (const auto& [name, value] : options)
        send("setoption name " + name + " value " + value);
    send("isready");
    for (;;) {
        auto line = read_line(timeout_ms);
        if (!line) throw UciError("handshake timeout waiting for readyok");
        if (*line == "readyok") break;
    }
}

void UciClient::new_game() {
    send("ucinewgame");
    send("isready");
    for (;;) {
        auto line = read_line(10000);
        if (!line) throw UciError("timeout waiting for readyok");
        if (*line == "readyok") break;
    }
}

SearchResult UciClient::go(const Position& p, const SearchLimits& limits,
                           const AlphaBetaSearcher::IterationCallback&
                               on_iteration) {
    send("position fen " + p.fen());
    std::string cmd = "go";
    if (limits.max_depth > 0) cmd += " depth " + std::to_string(limits.max_depth);
    if (limits.max_nodes > 0) cmd += " nodes " + std::to_string(limits.max_nodes);
    if (limits.max_time_ms > 0)
        cmd += " movetime " + std::to_string(limits.max_time_ms);
    if (cmd == "go") cmd += " infinite";
    send(cmd);

    SearchResult last{};
    int current_depth = -1;
    std::map<int, UciInfoLine> lines_by_rank;
    auto flush_iteration = [&]() {
        if (lines_by_rank.empty()) return;
        SearchResult it;
        it.nominal_depth = current_depth;
        for (const auto& [rank, info] : lines_by_rank) {
            Move head = info.pv.empty() ? Move{} : info.pv.front();
            it.lines.push_back({head, info.score, info.pv});
            it.nodes = std::max(it.nodes, info.nodes);
            it.elapsed_ms = std::max(it.elapsed_ms, info.time_ms);
        }
        last = it;
        if (on_iteration) on_iteration(it);
        lines_by_rank.clear();
    };

    for (;;) {
        auto line = read_line(600000);
        if (!line) throw UciError("timeout waiting for bestmove");
        if (line->rfind("bestmove", 0) == 0) {
            flush_iteration();
            auto tokens = line->substr(8);
            std::istringstream in(tokens);
            std::string best;
            in >> best;
            if (auto m = move_from_uci(best); m && !last.lines.empty())
                if (!(last.lines.front().move == *m)) {
                    // keep the engine's final answer on top
                    for (std::size_t i = 1; i < last.lines.size(); ++i)
                        if (last.lines[i].move == *m)
                            std::swap(last.lines[0], last.lines[i]);
                }
            return last;
        }
        auto info = parse_info_line(*line);
        if (!info || info->pv.empty()) continue;
        if (info->depth != current_depth) {
            flush_iteration();
            current_depth = info->depth;
        }
        lines_by_rank[info->multipv] = *info;
    }
}

void UciClient::stop() { send("stop"); }

void UciClient::quit() {
    if (pid_ < 0) return;
    try {
        send("quit");
    } catch (...) {
    }
    ::close(to_engine_);
    int status = 0;
    for (int i = 0; i < 200; ++i) {
        if (::waitpid(pid_, &status, WNOHANG) == pid_) {
            pid_ = -1;
            break;
        }
        ::usleep(10000);
    }
    if (pid_ >= 0) {
        ::kill(pid_, SIGKILL);
        ::waitpid(pid_, &status, 0);
        pid_ = -1;
    }
    ::close(from_engine_);
    to_engine_ = from_engine_ = -1;
}

}  // namespace dualmind
