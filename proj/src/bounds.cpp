#include "arsim/bounds.hpp"

#include "arsim/search.hpp"

#include <algorithm>
#include <sstream>

namespace arsim {

std::string_view column_name(Column c) {
    switch (c) {
        case Column::Completeness: return "completeness";
        case Column::WeakAccuracy: return "weak_accuracy";
        case Column::CompletenessWeak: return "completeness+weak_accuracy";
        case Column::StrongAccuracy: return "strong_accuracy";
        case Column::CompletenessStrong: return "completeness+strong_accuracy";
    }
    return "?";
}

std::vector<Property> column_properties(Column c) {
    switch (c) {
        case Column::Completeness: return {Property::Completeness};
        case Column::WeakAccuracy: return {Property::WeakAccuracy};
        case Column::CompletenessWeak: return {Property::Completeness, Property::WeakAccuracy};
        case Column::StrongAccuracy: return {Property::StrongAccuracy};
        case Column::CompletenessStrong: return {Property::Completeness, Property::StrongAccuracy};
    }
    return {};
}

namespace {

std::string tau_cell(const std::vector<TauResult>& rows, std::size_t col) {
    // Least tau from which every larger tau in range admits some t.
    std::optional<std::size_t> least;
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
        if (it->satisfying[col].empty()) {
            break;
        }
        least = it->tau;
    }
    return least ? "tau>=" + std::to_string(*least) : "impossible";
}

std::string t_cell(const std::vector<TauResult>& rows, std::size_t col) {
    // Minimal t per tau, expressed either as a constant or as tau + c.
    std::vector<std::pair<std::size_t, std::size_t>> mins;
    for (const auto& r : rows) {
        const auto& ok = r.satisfying[col];
        if (ok.empty()) {
            return "none at tau=" + std::to_string(r.tau);
        }
        // Accuracy is monotone in t; insist the surviving set is upward closed.
        if (ok.back() != r.n || ok.size() != r.n - ok.front() + 1) {
            return "non-monotone at tau=" + std::to_string(r.tau);
        }
        mins.emplace_back(r.tau, ok.front());
    }
    const bool constant = std::all_of(mins.begin(), mins.end(), [&](auto& m) { return m.second == mins[0].second; });
    if (constant) {
        return "t>=" + std::to_string(mins[0].second);
    }
    const auto offset = static_cast<long>(mins[0].second) - static_cast<long>(mins[0].first);
    const bool shifted = std::all_of(mins.begin(), mins.end(), [&](auto& m) {
        return static_cast<long>(m.second) - static_cast<long>(m.first) == offset;
    });
    if (shifted) {
        return "t>=tau" + std::string(offset >= 0 ? "+" : "") + std::to_string(offset);
    }
    std::string s = "t>=";
    for (std::size_t i = 0; i < mins.size(); ++i) {
        s += (i ? "," : "") + std::to_string(mins[i].second) + "@tau=" + std::to_string(mins[i].first);
    }
    return s;
}

}  // namespace

BoundsRow minimal_bounds(Model model, const BoundsOptions& o) {
    BoundsRow row;
    row.model = model;
    const auto lo = o.tau_min != 0 ? o.tau_min : o.f + 1;
    auto hi = o.tau_max;
    if (hi == 0) {
        hi = 3 * o.f + 2;
        while (hi > lo && hi + 2 * o.f > 7) {
            --hi;
        }
    }
    for (auto tau = lo; tau <= hi; ++tau) {
        SearchSpace space;
        space.f = o.f;
        space.tau = tau;
        space.n = tau + 2 * o.f;
        space.model = model;
        space.cap = o.cap;
        space.workers = o.workers;
        const auto result = explore(space);
        TauResult tr;
        tr.tau = tau;
        tr.n = space.n;
        tr.states = result.states_explored;
        for (std::size_t c = 0; c < kColumns.size(); ++c) {
            tr.satisfying[c] = result.satisfying(column_properties(kColumns[c]));
        }
        row.per_tau.push_back(std::move(tr));
    }
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
        const bool by_t = kColumns[c] == Column::WeakAccuracy || kColumns[c] == Column::StrongAccuracy;
        row.cells[c] = by_t ? t_cell(row.per_tau, c) : tau_cell(row.per_tau, c);
    }
    return row;
}

std::vector<BoundsRow> table1(const BoundsOptions& options) {
    std::vector<BoundsRow> rows;
    for (auto m : kTableModels) {
        rows.push_back(minimal_bounds(m, options));
    }
    return rows;
}

std::array<std::string, 5> expected_row(Model model, std::size_t f) {
    const auto tau = [](std::size_t v) { return "tau>=" + std::to_string(v); };
    const auto t = [](std::size_t v) { return "t>=" + std::to_string(v); };
    const std::string completeness = tau(2 * f + 1);
    const std::string sa_fast = "t>=tau+" + std::to_string(f);
    switch (model) {
        case Model::Fast: return {completeness, t(f + 1), tau(3 * f + 1), sa_fast, "impossible"};
        case Model::Signed: return {completeness, t(1), tau(2 * f + 1), sa_fast, "impossible"};
        case Model::Total:
        case Model::NonFast: return {completeness, t(f + 1), tau(3 * f + 1), t(f + 1), tau(3 * f + 1)};
        case Model::TotalSigned: return {completeness, t(1), tau(2 * f + 1), t(f + 1), tau(3 * f + 1)};
        case Model::NonFastSigned: return {completeness, t(1), tau(2 * f + 1), t(1), tau(2 * f + 1)};
    }
    return {};
}

std::string render_table(const std::vector<BoundsRow>& rows, std::size_t f) {
    std::ostringstream out;
    const char* headers[] = {"model", "completeness", "weak acc.", "C + weak acc.", "strong acc.", "C + strong acc."};
    const int widths[] = {16, 14, 11, 15, 13, 16};
    for (int i = 0; i < 6; ++i) {
        out << headers[i] << std::string(std::max(1, widths[i] - static_cast<int>(std::string(headers[i]).size())), ' ');
    }
    out << "match\n";
    for (const auto& row : rows) {
        const auto expected = expected_row(row.model, f);
        std::string name(model_name(row.model));
        out << name << std::string(std::max<int>(1, widths[0] - static_cast<int>(name.size())), ' ');
        bool all = true;
        for (std::size_t c = 0; c < 5; ++c) {
            std::string cell = row.cells[c];
            if (cell != expected[c]) {
                cell += " (want " + expected[c] + ")";
                all = false;
            }
            out << cell << std::string(std::max<int>(1, widths[c + 1] - static_cast<int>(cell.size())), ' ');
        }
        out << (all ? "yes" : "NO") << '\n';
    }
    return out.str();
}

}  // namespace arsim
