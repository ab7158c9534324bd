#include "dualmind/uci.hpp"

namespace dualmind {

namespace {

class ExternalUciEngine : public EngineHandle {
public:
    ExternalUciEngine(std::string id, std::string path)
        : id_(std::move(id)), path_(std::move(path)) {}

    std::string id() const override { return id_; }
    std::string family() const override { return family_; }

    void apply_option(const std::string& name, const std::string& value) override {
        // "Family" steers the report's compute-ratio bookkeeping and stays
        // on our side of the pipe.
        if (name == "Family") {
            if (value != "ab" && value != "mcts")
                throw BenchError("Family must be ab or mcts");
            family_ = value;
            return;
        }
        options_.emplace_back(name, value);
        if (client_) client_.reset();  // reconnect with the new option set
    }

    SearchResult analyze(const Position& p, const SearchLimits& limits,
                         const AlphaBetaSearcher::IterationCallback&
                             on_iteration) override {
        if (!client_) client_ = std::make_unique<UciClient>(path_, options_);
        client_->new_game();
        return client_->go(p, limits, on_iteration);
    }

    void request_stop() override {
        if (client_) client_->stop();
    }

private:
    std::string id_;
    std::string path_;
    std::string family_ = "ab";
    std::vector<std::pair<std::string, std::string>> options_;
    std::unique_ptr<UciClient> client_;
};

}  // namespace

std::unique_ptr<EngineHandle> make_engine(const EngineSpec& spec) {
    std::unique_ptr<EngineHandle> engine;
    if (spec.is_internal())
        engine = make_internal_engine(spec.target.substr(9), spec.id);
    else
        engine = std::make_unique<ExternalUciEngine>(spec.id, spec.target);
    for (const auto& [name, value] : spec.options)
        engine->apply_option(name, value);
    return engine;
}

}  // namespace dualmind
