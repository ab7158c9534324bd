#include <algorithm>
#include <cmath>

#include "dualmind/bench.hpp"
#include "dualmind/mcts.hpp"
#include "dualmind/winprob.hpp"

namespace dualmind {

namespace {

bool parse_bool(const std::string& v) {
    return v == "true" || v == "1" || v == "on" || v == "yes";
}

class InternalAbEngine : public EngineHandle {
public:
    explicit InternalAbEngine(std::string id)
        : id_(std::move(id)),
          searcher_(std::make_unique<AlphaBetaSearcher>()) {}

    std::string id() const override { return id_; }
    std::string family() const override { return "ab"; }

    // Options may only change between searches; rebuilding the searcher
    // here keeps the running one stable for request_stop().
    void apply_option(const std::string& name, const std::string& value) override {
        if (name == "FutilityPruning") toggles_.futility = parse_bool(value);
        else if (name == "LMR") toggles_.lmr = parse_bool(value);
        else if (name == "TT") toggles_.tt = parse_bool(value);
        else if (name == "Quiescence") toggles_.quiescence = parse_bool(value);
        else if (name == "TTSizeMiB") tt_mib_ = std::stoul(value);
        else throw BenchError("unknown option " + name + " for engine " + id_);
        searcher_ = std::make_unique<AlphaBetaSearcher>(toggles_, tt_mib_);
    }

    void set_history(std::vector<std::uint64_t> zobrists) override {
        history_ = std::move(zobrists);
    }

    SearchResult analyze(const Position& p, const SearchLimits& limits,
                         const AlphaBetaSearcher::IterationCallback&
                             on_iteration) override {
        searcher_->new_game();  // trial isolation: no TT carryover
        return searcher_->search(p, limits, history_, on_iteration);
    }

    void request_stop() override { searcher_->request_stop(); }

private:
    std::string id_;
    std::vector<std::uint64_t> history_;
    HeuristicToggles toggles_;
    std::size_t tt_mib_ = 64;
    std::unique_ptr<AlphaBetaSearcher> searcher_;
};

class InternalMctsEngine : public EngineHandle {
public:
    explicit InternalMctsEngine(std::string id)
        : id_(std::move(id)),
          searcher_(std::make_unique<MctsSearcher>()) {}

    std::string id() const override { return id_; }
    std::string family() const override { return "mcts"; }

    void apply_option(const std::string& name, const std::string& value) override {
        if (name == "CInit") params_.c_init = std::stod(value);
        else if (name == "CBase") params_.c_base = std::stod(value);
        else if (name == "FPU") params_.fpu = std::stod(value);
        else if (name == "Seed") params_.seed = std::stoull(value);
        else if (name == "Simulations") default_sims_ = std::stoi(value);
        else if (name == "Evaluator") evaluator_name_ = value;
        else if (name == "OracleHorizon") oracle_horizon_ = std::stoi(value);
        else throw BenchError("unknown option " + name + " for engine " + id_);
        searcher_ = std::make_unique<MctsSearcher>(params_);
    }

    SearchResult analyze(const Position& p, const SearchLimits& limits,
                         const AlphaBetaSearcher::IterationCallback&
                             on_iteration) override {
        int sims = limits.max_nodes
                       ? static_cast<int>(limits.max_nodes)
                       : default_sims_;
        EvaluationProvider provider =
            evaluator_name_ == "oracle" ? make_oracle_evaluator(oracle_horizon_)
                                        : make_classical_evaluator();
        int multipv = std::max(1, limits.multipv);
        auto convert = [multipv](const MctsResult& r) {
            SearchResult out;
            out.nominal_depth = r.simulations;
            out.nodes = static_cast<std::uint64_t>(r.simulations);
            out.elapsed_ms = r.elapsed_ms;
            for (const auto& st : r.stats) {
                if (static_cast<int>(out.lines.size()) >= multipv) break;
                double wp = value_to_winprob(st.q);
                Score sc = Score::cp(static_cast<int>(
                    std::lround(winprob_to_cp(std::clamp(wp, 1e-6, 1.0 - 1e-6)))));
                out.lines.push_back({st.move, sc, {st.move}});
            }
            auto best_at = std::find_if(
                out.lines.begin(), out.lines.end(),
                [&](const SearchLine& l) { return l.move == r.best; });
            if (best_at != out.lines.end())
                std::iter_swap(out.lines.begin(), best_at);
            else if (!out.lines.empty())
                out.lines.front() = {r.best, out.lines.front().score, {r.best}};
            if (!out.lines.empty()) out.lines.front().pv = r.pv;
            return out;
        };
        int report_every = std::max(1, sims / 10);
        MctsResult final = searcher_->run(
            p, sims, provider, report_every,
            [&](const MctsResult& r) { if (on_iteration) on_iteration(convert(r)); });
        SearchResult last = convert(final);
        if (on_iteration) on_iteration(last);
        return last;
    }

    void request_stop() override { searcher_->request_stop(); }

private:
    std::string id_;
    PuctParams params_;
    int default_sims_ = 10000;
    std::string evaluator_name_ = "classical";
    int oracle_horizon_ = 5;
    std::unique_ptr<MctsSearcher> searcher_;
};

}  // namespace

std::unique_ptr<EngineHandle> make_internal_engine(const std::string& name,
                                                   const std::string& id) {
    std::string label = id.empty() ? name : id;
    if (name == "ab") return std::make_unique<InternalAbEngine>(label);
    if (name == "mcts") return std::make_unique<InternalMctsEngine>(label);
    throw BenchError("unknown internal engine '" + name + "'");
}

SuiteRecord run_trial(EngineHandle& engine, const StudyEntry& study,
                      const SearchLimits& limits, const SolveRule& rule) {
    SuiteRecord rec;
    rec.study = study.id;
    rec.engine = engine.id();
    rec.family = engine.family();

    try {
        int stable = 0;
        auto capture = [&](const SearchResult& it) {
            if (it.lines.empty()) return;
            rec.solution_move = it.lines.front().move;
            rec.score = it.lines.front().score;
            rec.winprob = cp_to_winprob(rec.score);
            rec.nodes = it.nodes;
            rec.elapsed_ms = it.elapsed_ms;
            rec.depth = it.nominal_depth;
            rec.top_lines = it.lines;
        };
        auto on_iteration = [&](const SearchResult& it) {
            if (rec.solved || it.lines.empty()) return;
            const SearchLine& top = it.lines.front();
            bool bm_hit = std::find(study.best_moves.begin(),
                                    study.best_moves.end(),
                                    top.move) != study.best_moves.end();
            stable = bm_hit ? stable + 1 : 0;
            bool mate_hit = rule.accept_mate && study.mate_distance &&
                            top.score.is_mate() && top.score.value > 0 &&
                            top.score.value <= *study.mate_distance;
            if (stable >= rule.stable_iterations || mate_hit) {
                rec.solved = true;
                capture(it);
            }
        };
        SearchResult final = engine.analyze(study.position, limits, on_iteration);
        if (!rec.solved) capture(final);
    } catch (const std::exception& e) {
        rec.failed = true;
        rec.solved = false;
        rec.diagnostic = e.what();
    }
    return rec;
}

std::vector<SuiteRecord> run_suite(EngineHandle& engine, const StudySuite& suite,
                                   const SearchLimits& limits,
                                   const SolveRule& rule) {
    std::vector<SuiteRecord> records;
    records.reserve(suite.entries.size());
    for (const auto& study : suite.entries)
        records.push_back(run_trial(engine, study, limits, rule));
    return records;
}

}  // namespace dualmind
