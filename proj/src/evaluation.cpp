#include "spoofbench/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "spoofbench/error.hpp"

namespace spoofbench {

Rates confusion_rates(std::span<const ScoredSample> scored, double tau) {
    std::size_t attacks = 0, bonafide = 0, attacks_accepted = 0, bonafide_rejected = 0;
    for (const auto& s : scored) {
        if (!std::isfinite(s.score)) throw EvalError("non-finite score for identity " + s.identity);
        if (s.label == Label::attack) {
            ++attacks;
            if (s.score >= tau) ++attacks_accepted;  // attack passed as bonafide
        } else {
            ++bonafide;
            if (s.score < tau) ++bonafide_rejected;  // bonafide rejected as attack
        }
    }
    if (attacks == 0 || bonafide == 0)
        throw EvalError(std::string("score set lacks ") + (attacks == 0 ? "attack" : "bonafide") + " samples");
    return {100.0 * static_cast<double>(attacks_accepted) / static_cast<double>(attacks),
            100.0 * static_cast<double>(bonafide_rejected) / static_cast<double>(bonafide)};
}

ThresholdResult best_acer(std::span<const ScoredSample> scored) {
    std::vector<double> unique_scores;
    unique_scores.reserve(scored.size());
    for (const auto& s : scored) unique_scores.push_back(s.score);
    std::sort(unique_scores.begin(), unique_scores.end());
    unique_scores.erase(std::unique(unique_scores.begin(), unique_scores.end()), unique_scores.end());

    std::vector<double> candidates;
    candidates.push_back(-std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i + 1 < unique_scores.size(); ++i)
        candidates.push_back(unique_scores[i] + (unique_scores[i + 1] - unique_scores[i]) / 2.0);
    candidates.push_back(std::numeric_limits<double>::infinity());

    ThresholdResult best;
    best.acer = std::numeric_limits<double>::infinity();
    for (double tau : candidates) {  // ascending order; strict < keeps the smallest tau on ties
        const Rates rates = confusion_rates(scored, tau);
        const double acer = (rates.apcer + rates.bpcer) / 2.0;
        if (acer < best.acer) {
            best = {tau, acer, rates};
        }
    }
    return best;
}

EvalReport evaluate_per_identity(std::span<const ScoredSample> scored) {
    if (scored.empty()) throw EvalError("no scored samples");
    std::map<std::string, std::vector<ScoredSample>> groups;
    for (const auto& s : scored) groups[s.identity].push_back(s);

    EvalReport report;
    for (const auto& [identity, samples] : groups) {
        std::size_t bonafide = 0, attacks = 0;
        for (const auto& s : samples) (s.label == Label::bonafide ? bonafide : attacks) += 1;
        if (bonafide == 0 || attacks == 0) {
            report.skipped.push_back(identity);
            continue;
        }
        const ThresholdResult r = best_acer(samples);
        report.identities.push_back({identity, r.tau, r.rates.apcer, r.rates.bpcer, r.acer, bonafide, attacks});
    }
    if (report.identities.empty()) throw EvalError("every identity lacks one of the two classes");

    for (const auto& entry : report.identities) {
        report.mean_acer += entry.acer;
        report.mean_apcer += entry.apcer;
        report.mean_bpcer += entry.bpcer;
    }
    const double inv = 1.0 / static_cast<double>(report.identities.size());
    report.mean_acer *= inv;
    report.mean_apcer *= inv;
    report.mean_bpcer *= inv;
    return report;
}

namespace {

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

}  // namespace

std::string format_report_table(const EvalReport& report) {
    std::ostringstream out;
    out << "identity        ACER(%)   APCER(%)  BPCER(%)  tau\n";
    for (const auto& e : report.identities) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-15s %-9s %-9s %-9s %g\n", e.identity.c_str(), fixed3(e.acer).c_str(),
                      fixed3(e.apcer).c_str(), fixed3(e.bpcer).c_str(), e.tau);
        out << line;
    }
    out << "mean            " << fixed3(report.mean_acer) << " (" << fixed3(report.mean_apcer) << ", "
        << fixed3(report.mean_bpcer) << ")\n";
    for (const auto& id : report.skipped) out << "warning: identity " << id << " skipped (missing a class)\n";
    return out.str();
}

void write_report_file(const EvalReport& report, std::ostream& out, const std::vector<std::string>& comment_lines) {
    for (const auto& line : comment_lines) out << "# " << line << "\n";
    for (const auto& id : report.skipped) out << "# warning: identity " << id << " skipped (missing a class)\n";
    out << "identity,tau,apcer,bpcer,acer\n";
    for (const auto& e : report.identities) {
        out << e.identity << ',' << format_double(e.tau) << ',' << format_double(e.apcer) << ','
            << format_double(e.bpcer) << ',' << format_double(e.acer) << "\n";
    }
    out << "aggregate,," << format_double(report.mean_apcer) << ',' << format_double(report.mean_bpcer) << ','
        << format_double(report.mean_acer) << "\n";
}

void write_scores(std::span<const ScoredSample> scored, std::ostream& out, const std::vector<std::string>& comment_lines) {
    for (const auto& line : comment_lines) out << "# " << line << "\n";
    for (const auto& s : scored) out << s.identity << ',' << label_name(s.label) << ',' << format_double(s.score) << "\n";
}

std::vector<ScoredSample> load_scores(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<ScoredSample> scored;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const std::size_t p1 = line.find(',');
        const std::size_t p2 = p1 == std::string::npos ? std::string::npos : line.find(',', p1 + 1);
        if (p2 == std::string::npos) throw ParseError("line " + std::to_string(line_no) + ": expected identity,label,score");
        ScoredSample s;
        s.identity = line.substr(0, p1);
        try {
            s.label = parse_label(line.substr(p1 + 1, p2 - p1 - 1));
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        char* end = nullptr;
        s.score = std::strtod(line.c_str() + p2 + 1, &end);
        if (end == line.c_str() + p2 + 1) throw ParseError("line " + std::to_string(line_no) + ": bad score");
        scored.push_back(std::move(s));
    }
    if (scored.empty()) throw ParseError(path + ": no scores");
    return scored;
}

}  // namespace spoofbench
