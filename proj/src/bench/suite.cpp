#include <fstream>
#include <set>
#include <sstream>

#include "dualmind/bench.hpp"

namespace dualmind {

StudySuite load_suite(std::istream& in, const std::string& name) {
    StudySuite suite;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        EpdRecord rec;
        try {
            rec = parse_epd(line);
        } catch (const EpdError& e) {
            throw BenchError(name + " line " + std::to_string(lineno) + ": " +
                             e.what());
        }
        StudyEntry entry;
        entry.id = rec.id.empty()
                       ? name + "#" + std::to_string(lineno)
                       : rec.id;
        entry.position = rec.position;
        entry.best_moves = rec.best_moves;
        entry.mate_distance = rec.mate_distance;
        if (entry.best_moves.empty() && !entry.mate_distance)
            throw BenchError(name + " line " + std::to_string(lineno) +
                             ": study needs a bm or dm opcode");
        if (!seen.insert(entry.id).second)
            throw BenchError(name + ": duplicate study id '" + entry.id + "'");
        suite.entries.push_back(std::move(entry));
    }
    if (suite.entries.empty()) throw BenchError(name + ": no studies found");
    return suite;
}

StudySuite load_suite_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BenchError("cannot open suite file " + path);
    return load_suite(in, path);
}

std::vector<EngineSpec> parse_manifest(std::istream& in) {
    std::vector<EngineSpec> specs;
    std::set<std::string> ids;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        auto a = s.find_first_not_of(" \t\r");
        auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.rfind("option ", 0) == 0) {
            if (specs.empty())
                throw BenchError("manifest line " + std::to_string(lineno) +
                                 ": option before any engine");
            std::string rest = trim(t.substr(7));
            auto eq = rest.find('=');
            if (eq == std::string::npos)
                throw BenchError("manifest line " + std::to_string(lineno) +
                                 ": option needs NAME=VALUE");
            specs.back().options.emplace_back(trim(rest.substr(0, eq)),
                                              trim(rest.substr(eq + 1)));
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw BenchError("manifest line " + std::to_string(lineno) +
                             ": expected `id = target`");
        EngineSpec spec;
        spec.id = trim(t.substr(0, eq));
        spec.target = trim(t.substr(eq + 1));
        if (spec.id.empty() || spec.target.empty())
            throw BenchError("manifest line " + std::to_string(lineno) +
                             ": empty id or target");
        if (!ids.insert(spec.id).second)
            throw BenchError("manifest: duplicate engine id '" + spec.id + "'");
        specs.push_back(std::move(spec));
    }
    if (specs.empty()) throw BenchError("manifest: no engines defined");
    return specs;
}

std::vector<EngineSpec> parse_manifest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BenchError("cannot open manifest file " + path);
    return parse_manifest(in);
}

}  // namespace dualmind
