#include "precmon/pwlc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "precmon/errors.hpp"

namespace precmon {

std::string_view to_string(Action a) noexcept {
    switch (a) {
        case Action::cont: return "continue";
        case Action::abandon: return "abandon";
        case Action::monitor: return "monitor";
        case Action::skip: return "skip";
    }
    return "?";
}

Action action_from_string(std::string_view s) {
    if (s == "continue") return Action::cont;
    if (s == "abandon") return Action::abandon;
    if (s == "monitor") return Action::monitor;
    if (s == "skip") return Action::skip;
    throw InputError("unknown action tag '" + std::string(s) + "'");
}

std::string_view to_string(StageKind k) noexcept {
    return k == StageKind::monitoring ? "monitoring" : "action";
}

namespace {

int tie_rank(Action a) noexcept {
    switch (a) {
        case Action::cont: return 0;
        case Action::skip: return 1;
        case Action::monitor: return 2;
        case Action::abandon: return 3;
    }
    return 4;
}

bool same_line(const AlphaVector& a, const AlphaVector& b) noexcept {
    return std::abs(a.v_ok - b.v_ok) < kEnvelopeTol && std::abs(a.v_fail - b.v_fail) < kEnvelopeTol;
}

std::vector<AlphaVector> dedupe(const std::vector<AlphaVector>& in) {
    std::vector<AlphaVector> out;
    out.reserve(in.size());
    for (const auto& v : in) {
        auto twin = std::find_if(out.begin(), out.end(),
                                 [&](const AlphaVector& u) { return same_line(u, v); });
        if (twin == out.end())
            out.push_back(v);
        else if (preferred_on_tie(v, *twin))
            *twin = v;
    }
    return out;
}

}  // namespace

bool preferred_on_tie(const AlphaVector& a, const AlphaVector& b) noexcept {
    const int ra = tie_rank(a.action), rb = tie_rank(b.action);
    if (ra != rb) return ra < rb;
    if (a.v_ok != b.v_ok) return a.v_ok < b.v_ok;
    return a.v_fail < b.v_fail;
}

Evaluation evaluate(const VectorSet& set, double b) {
    if (set.empty()) throw ContractError("evaluate: empty vector set");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : set.vectors) best = std::max(best, v.value(b));

    const AlphaVector* pick = nullptr;
    for (const auto& v : set.vectors) {
        if (v.value(b) < best - kEnvelopeTol) continue;
        if (pick == nullptr || preferred_on_tie(v, *pick)) pick = &v;
    }
    return {best, pick};
}

VectorSet prune_envelope(const VectorSet& set) {
    if (set.empty()) throw ContractError("prune_envelope: empty vector set");
    const auto lines = dedupe(set.vectors);
    if (lines.size() == 1) return {lines, set.kind};

    // Winner at b = 0: highest intercept, then steepest.
    std::size_t cur = 0;
    for (std::size_t j = 1; j < lines.size(); ++j) {
        const auto& a = lines[j];
        const auto& c = lines[cur];
        if (a.v_fail > c.v_fail || (a.v_fail == c.v_fail && a.slope() > c.slope())) cur = j;
    }

    // Walk right along the envelope: the next piece is the steeper line that
    // overtakes the current one first.
    struct Piece {
        std::size_t line;
        double from;
    };
    std::vector<Piece> pieces{{cur, 0.0}};
    double x = 0.0;
    for (;;) {
        const double s_cur = lines[cur].slope();
        std::size_t next = lines.size();
        double next_x = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < lines.size(); ++j) {
            const double s_j = lines[j].slope();
            if (!(s_j > s_cur)) continue;
            double cx = (lines[cur].v_fail - lines[j].v_fail) / (s_j - s_cur);
            cx = std::max(cx, x);
            if (cx < next_x || (cx == next_x && next != lines.size() && s_j > lines[next].slope())) {
                next_x = cx;
                next = j;
            }
        }
        if (next == lines.size() || next_x >= 1.0) break;
        pieces.push_back({next, next_x});
        cur = next;
        x = next_x;
    }

    // Keep only pieces that strictly win at their interval midpoint against
    // the pieces still kept. Dropping greedily keeps one of a near-twin pair.
    std::vector<bool> kept(pieces.size(), true);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const double lo = pieces[i].from;
        const double hi = i + 1 < pieces.size() ? pieces[i + 1].from : 1.0;
        const double w = 0.5 * (lo + hi);
        double rival = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pieces.size(); ++j) {
            if (j != i && kept[j] && pieces[j].line != pieces[i].line)
                rival = std::max(rival, lines[pieces[j].line].value(w));
        }
        kept[i] = lines[pieces[i].line].value(w) - rival > kEnvelopeTol;
    }
    VectorSet out{{}, set.kind};
    for (std::size_t i = 0; i < pieces.size(); ++i)
        if (kept[i]) out.vectors.push_back(lines[pieces[i].line]);
    // Every line tied to within tolerance everywhere: keep the preferred one.
    if (out.vectors.empty()) {
        const AlphaVector* pick = &lines[pieces.front().line];
        for (const auto& p : pieces)
            if (preferred_on_tie(lines[p.line], *pick)) pick = &lines[p.line];
        out.vectors.push_back(*pick);
    }
    return out;
}

VectorSet monitoring_backup(const VectorSet& next, const SensorModel& sensor, double cost) {
    if (next.empty()) throw ContractError("monitoring_backup: empty successor set");
    const double hit_ok = 1.0 - sensor.false_negative;  // Pr(holds-report | OK)
    const double miss_ok = sensor.false_negative;       // Pr(failed-report | OK)
    const double hit_fail = sensor.false_positive;      // Pr(holds-report | FAIL)
    const double miss_fail = 1.0 - sensor.false_positive;

    VectorSet all{{}, StageKind::monitoring};
    all.vectors.reserve(next.size() * next.size() + next.size());
    for (const auto& on_holds : next.vectors) {
        for (const auto& on_failed : next.vectors) {
            AlphaVector v;
            v.action = Action::monitor;
            v.v_ok = -cost + hit_ok * on_holds.v_ok + miss_ok * on_failed.v_ok;
            v.v_fail = -cost + hit_fail * on_holds.v_fail + miss_fail * on_failed.v_fail;
            v.p_ok = hit_ok * on_holds.p_ok + miss_ok * on_failed.p_ok;
            v.p_fail_reach = hit_fail * on_holds.p_fail_reach + miss_fail * on_failed.p_fail_reach;
            all.vectors.push_back(v);
        }
    }
    for (auto v : next.vectors) {
        v.action = Action::skip;
        all.vectors.push_back(v);
    }
    return prune_envelope(all);
}

VectorSet action_backup_interior(const VectorSet& next, const TransitionModel& trans,
                                 double alt_value) {
    if (next.empty()) throw ContractError("action_backup_interior: empty successor set");
    const double stay_ok = 1.0 - trans.p_fail;
    const double stay_fail = 1.0 - trans.p_repair;

    VectorSet all{{}, StageKind::action};
    all.vectors.reserve(next.size() + 1);
    all.vectors.push_back({alt_value, alt_value, Action::abandon, 0.0, 0.0});
    for (const auto& a : next.vectors) {
        AlphaVector v;
        v.action = Action::cont;
        v.v_ok = stay_ok * a.v_ok + trans.p_fail * a.v_fail;
        v.v_fail = trans.p_repair * a.v_ok + stay_fail * a.v_fail;
        v.p_ok = stay_ok * a.p_ok + trans.p_fail * a.p_fail_reach;
        v.p_fail_reach = trans.p_repair * a.p_ok + stay_fail * a.p_fail_reach;
        all.vectors.push_back(v);
    }
    return prune_envelope(all);
}

VectorSet terminal_set(double plan_value, double fail_value, double alt_value) {
    if (alt_value < fail_value) throw ContractError("terminal_set: alt_value must be >= fail_value");
    VectorSet all{{}, StageKind::action};
    all.vectors.push_back({alt_value, alt_value, Action::abandon, 0.0, 0.0});
    all.vectors.push_back({plan_value, fail_value, Action::cont, 1.0, 0.0});
    return prune_envelope(all);
}

}  // namespace precmon
