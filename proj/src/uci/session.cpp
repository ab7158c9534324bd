#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "dualmind/uci.hpp"

namespace dualmind {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> tokens;
    std::string t;
    while (in >> t) tokens.push_back(t);
    return tokens;
}

bool log_enabled() {
    static const bool on = [] {
        const char* v = std::getenv("DUALMIND_LOG");
        return v && std::string(v) != "" && std::string(v) != "off";
    }();
    return on;
}

void warn(const std::string& msg) {
    std::cerr << "warning: " << msg << "\n";
}

void log_line(const std::string& msg) {
    if (log_enabled()) std::cerr << "log: " << msg << "\n";
}

}  // namespace

std::string format_info_line(const UciInfoLine& info) {
    std::ostringstream out;
    out << "info depth " << info.depth << " multipv " << info.multipv
        << " score " << score_to_uci(info.score) << " nodes " << info.nodes
        << " nps " << info.nps << " time " << info.time_ms;
    if (!info.pv.empty()) {
        out << " pv";
        for (Move m : info.pv) out << ' ' << to_uci(m);
    }
    return out.str();
}

std::optional<UciInfoLine> parse_info_line(const std::string& line) {
    auto tokens = tokenize(line);
    if (tokens.empty() || tokens[0] != "info") return std::nullopt;
    UciInfoLine info;
    bool any = false;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        const std::string& t = tokens[i];
        auto next = [&]() -> std::optional<std::string> {
            if (i + 1 >= tokens.size()) return std::nullopt;
            return tokens[++i];
        };
        try {
            if (t == "depth") {
                if (auto v = next()) info.depth = std::stoi(*v), any = true;
            } else if (t == "multipv") {
                if (auto v = next()) info.multipv = std::stoi(*v), any = true;
            } else if (t == "nodes") {
                if (auto v = next()) info.nodes = std::stoull(*v), any = true;
            } else if (t == "nps") {
                if (auto v = next()) info.nps = std::stoull(*v), any = true;
            } else if (t == "time") {
                if (auto v = next()) info.time_ms = std::stoll(*v), any = true;
            } else if (t == "score") {
                auto kind = next();
                auto value = next();
                if (kind && value) {
                    int n = std::stoi(*value);
                    info.score =
                        *kind == "mate" ? Score::mate_in(n) : Score::cp(n);
                    any = true;
                }
            } else if (t == "pv") {
                while (i + 1 < tokens.size()) {
                    auto m = move_from_uci(tokens[i + 1]);
                    if (!m) break;
                    info.pv.push_back(*m);
                    ++i;
                }
                any = true;
            }
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
    if (!any) return std::nullopt;
    return info;
}

UciSession::UciSession(std::istream& in, std::ostream& out,
                       const std::string& engine_name)
    : in_(in), out_(out), name_(engine_name),
      engine_(make_internal_engine(engine_name)) {}

UciSession::~UciSession() { finish_search(); }

void UciSession::emit(const std::string& line) {
    std::lock_guard lock(out_mutex_);
    out_ << line << "\n";
    out_.flush();
}

void UciSession::finish_search() {
    if (worker_.joinable()) {
        interrupt_search();
        worker_.join();
    }
}

// The searcher rearms its stop flag when a search begins, so a stop that
// lands before the worker gets that far would be lost. Keep requesting
// until the worker reports it is done.
void UciSession::interrupt_search() {
    if (!worker_.joinable()) return;
    while (searching_.load()) {
        engine_->request_stop();
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
}

int UciSession::run() {
    std::string line;
    while (std::getline(in_, line)) {
        log_line("recv: " + line);
        if (line == "quit") break;
        try {
            handle_line(line);
        } catch (const std::exception& e) {
            warn(std::string("command failed: ") + e.what());
        }
    }
    finish_search();
    return 0;
}

void UciSession::handle_line(const std::string& line) {
    auto tokens = tokenize(line);
    if (tokens.empty()) return;
    const std::string& cmd = tokens[0];

    if (cmd == "uci") {
        emit("id name DualMind " + name_);
        emit("id author the DualMind developers");
        if (name_ == "ab") {
            emit("option name MultiPV type spin default 1 min 1 max 64");
            emit("option name FutilityPruning type check default true");
            emit("option name LMR type check default true");
            emit("option name TTSizeMiB type spin default 64 min 1 max 4096");
        } else {
            emit("option name Simulations type spin default 10000 min 1 max 100000000");
            emit("option name CInit type string default 1.25");
            emit("option name CBase type string default 19652");
            emit("option name FPU type string default 0.2");
            emit("option name Seed type spin default 0 min 0 max 2000000000");
        }
        identified_ = true;
        emit("uciok");
    } else if (cmd == "isready") {
        emit("readyok");
    } else if (cmd == "ucinewgame") {
        finish_search();
        position_ = Position::startpos();
        history_.clear();
    } else if (cmd == "position") {
        if (searching_.load()) {
            warn("position ignored while searching");
            return;
        }
        finish_search();
        cmd_position(tokens);
    } else if (cmd == "go") {
        cmd_go(tokens);
    } else if (cmd == "stop") {
        interrupt_search();
    } else if (cmd == "setoption") {
        if (searching_.load()) {
            warn("setoption ignored while searching");
            return;
        }
        finish_search();
        cmd_setoption(tokens);
    } else {
        warn("unknown command: " + cmd);
    }
}

void UciSession::cmd_position(const std::vector<std::string>& tokens) {
    std::size_t i = 1;
    Position p = Position::startpos();
    if (i < tokens.size() && tokens[i] == "startpos") {
        ++i;
    } else if (i < tokens.size() && tokens[i] == "fen") {
        std::string fen;
        ++i;
        while (i < tokens.size() && tokens[i] != "moves") {
            if (!fen.empty()) fen += ' ';
            fen += tokens[i++];
        }
        p = Position::from_fen(fen);
    } else {
        warn("position needs startpos or fen");
        return;
    }
    std::vector<std::uint64_t> history;
    if (i < tokens.size() && tokens[i] == "moves") {
        ++i;
        for (; i < tokens.size(); ++i) {
            auto m = move_from_uci(tokens[i]);
            if (!m) {
                warn("bad move token " + tokens[i]);
                return;
            }
            history.push_back(p.zobrist());
            p = p.apply(*m);
        }
    }
    position_ = p;
    history_ = std::move(history);
}

void UciSession::cmd_setoption(const std::vector<std::string>& tokens) {
    std::string name, value;
    std::size_t i = 1;
    if (i < tokens.size() && tokens[i] == "name") ++i;
    while (i < tokens.size() && tokens[i] != "value") {
        if (!name.empty()) name += ' ';
        name += tokens[i++];
    }
    if (i < tokens.size() && tokens[i] == "value") ++i;
    while (i < tokens.size()) {
        if (!value.empty()) value += ' ';
        value += tokens[i++];
    }
    if (name == "MultiPV") {
        multipv_ = std::max(1, std::stoi(value));
        return;
    }
    try {
        engine_->apply_option(name, value);
    } catch (const std::exception& e) {
        warn(e.what());
    }
}

void UciSession::cmd_go(const std::vector<std::string>& tokens) {
    if (searching_.load()) {
        warn("go ignored: already searching");
        return;
    }
    finish_search();

    SearchLimits limits;
    limits.multipv = multipv_;
    bool infinite = false;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        auto next = [&]() -> std::optional<std::string> {
            if (i + 1 >= tokens.size()) return std::nullopt;
            return tokens[++i];
        };
        if (tokens[i] == "depth") {
            if (auto v = next()) limits.max_depth = std::stoi(*v);
        } else if (tokens[i] == "nodes") {
            if (auto v = next()) limits.max_nodes = std::stoull(*v);
        } else if (tokens[i] == "movetime") {
            if (auto v = next()) limits.max_time_ms = std::stoll(*v);
        } else if (tokens[i] == "infinite") {
            infinite = true;
        } else {
            warn("ignoring go argument " + tokens[i]);
        }
    }
    if (infinite ||
        (limits.max_depth == 0 && limits.max_nodes == 0 && limits.max_time_ms == 0))
        limits.max_depth = 512;
    if (position_.result() != GameResult::Ongoing) {
        warn("go on a terminal position");
        emit("bestmove 0000");
        return;
    }

    searching_.store(true);
    Position p = position_;
    auto history = history_;
    worker_ = std::thread([this, p, limits, history] {
        auto on_iteration = [this](const SearchResult& it) {
            for (std::size_t k = 0; k < it.lines.size(); ++k) {
                UciInfoLine info;
                info.depth = it.nominal_depth;
                info.multipv = static_cast<int>(k) + 1;
                info.score = it.lines[k].score;
                info.nodes = it.nodes;
                info.time_ms = it.elapsed_ms;
                info.nps = it.elapsed_ms > 0
                               ? it.nodes * 1000 / it.elapsed_ms
                               : it.nodes;
                info.pv = it.lines[k].pv;
                emit(format_info_line(info));
            }
        };
        std::string best = "0000";
        try {
            engine_->set_history(history);
            SearchResult r = engine_->analyze(p, limits, on_iteration);
            if (!r.lines.empty()) best = to_uci(r.lines.front().move);
        } catch (const std::exception& e) {
            warn(std::string("search failed: ") + e.what());
        }
        // Clear the flag before announcing: a client may react to bestmove
        // instantly, and its next command must not see a stale "searching".
        searching_.store(false);
        emit("bestmove " + best);
    });
}

}  // namespace dualmind
