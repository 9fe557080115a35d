#include "reset_lab/solution_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "reset_lab/errors.hpp"

namespace reset_lab::io {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw ArgumentError("not a number: '" + std::string(text) + "'");
    }
    return v;
}

void write_solution_csv(std::ostream& os, const sim::HybridSolution& sol) {
    const auto n = sol.intervals.empty() || sol.intervals.front().samples.empty()
                       ? Eigen::Index{0}
                       : sol.intervals.front().samples.front().x.size();
    os << "t,j,q,tau";
    for (Eigen::Index i = 0; i < n; ++i) {
        os << ",x_" << (i + 1);
    }
    os << '\n';
    for (const auto& iv : sol.intervals) {
        for (const auto& s : iv.samples) {
            os << format_double(s.t) << ',' << iv.j << ',' << s.q << ',' << format_double(s.tau);
            for (Eigen::Index i = 0; i < s.x.size(); ++i) {
                os << ',' << format_double(s.x(i));
            }
            os << '\n';
        }
    }
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    for (;;) {
        const auto next = line.find(',', pos);
        out.push_back(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) {
            break;
        }
        pos = next + 1;
    }
    return out;
}

void rebuild_jumps(sim::HybridSolution& sol) {
    sol.jumps.clear();
    for (std::size_t k = 1; k < sol.intervals.size(); ++k) {
        const auto& before = sol.intervals[k - 1].samples.back();
        const auto& after = sol.intervals[k].samples.front();
        sol.jumps.push_back({after.t, before.x, after.x, before.q, before.tau, false});
    }
}

}  // namespace

sim::HybridSolution read_solution_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) {
        throw ArgumentError("solution csv: missing header");
    }
    const auto header = split(line);
    if (header.size() < 4 || header[0] != "t" || header[1] != "j" || header[2] != "q" || header[3] != "tau") {
        throw ArgumentError("solution csv: header must start with t,j,q,tau");
    }
    const auto n = static_cast<Eigen::Index>(header.size() - 4);
    sim::HybridSolution sol;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto cells = split(line);
        if (static_cast<Eigen::Index>(cells.size()) != n + 4) {
            throw ArgumentError("solution csv: row with " + std::to_string(cells.size()) + " cells, expected " +
                                std::to_string(n + 4));
        }
        sim::Sample s;
        s.t = parse_double(cells[0]);
        const int j = static_cast<int>(parse_double(cells[1]));
        s.q = static_cast<int>(parse_double(cells[2]));
        s.tau = parse_double(cells[3]);
        s.x.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            s.x(i) = parse_double(cells[static_cast<std::size_t>(i + 4)]);
        }
        if (sol.intervals.empty() || sol.intervals.back().j != j) {
            sol.intervals.push_back({s.t, s.t, j, {}});
        }
        sol.intervals.back().t_end = s.t;
        sol.intervals.back().samples.push_back(std::move(s));
    }
    rebuild_jumps(sol);
    return sol;
}

nlohmann::json matrix_to_json(const Mat& m) {
    auto rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        auto row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat matrix_from_json(const nlohmann::json& j, std::string_view what) {
    const std::string name(what);
    if (j.is_number()) {
        return Mat::Constant(1, 1, j.get<double>());
    }
    if (!j.is_array()) {
        throw ArgumentError(name + ": expected a number or an array");
    }
    if (j.empty()) {
        return Mat(0, 0);
    }
    if (!j.front().is_array()) {
        Mat v(static_cast<Eigen::Index>(j.size()), 1);
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (!j[i].is_number()) {
                throw ArgumentError(name + ": entry " + std::to_string(i) + " is not a number");
            }
            v(static_cast<Eigen::Index>(i), 0) = j[i].get<double>();
        }
        return v;
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    Mat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw ArgumentError(name + ": row " + std::to_string(r) + " is not an array of length " +
                                std::to_string(cols));
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& v = row[static_cast<std::size_t>(c)];
            if (!v.is_number()) {
                throw ArgumentError(name + ": entry (" + std::to_string(r) + ", " + std::to_string(c) +
                                    ") is not a number");
            }
            m(r, c) = v.get<double>();
        }
    }
    return m;
}

namespace {

nlohmann::json vec_to_json(const Vec& v) {
    auto a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(v(i));
    }
    return a;
}

Vec vec_from_json(const nlohmann::json& j) {
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

}  // namespace

nlohmann::json solution_to_json(const sim::HybridSolution& sol) {
    nlohmann::json out;
    out["intervals"] = nlohmann::json::array();
    for (const auto& iv : sol.intervals) {
        nlohmann::json jiv{{"t_start", iv.t_start}, {"t_end", iv.t_end}, {"j", iv.j}};
        jiv["samples"] = nlohmann::json::array();
        for (const auto& s : iv.samples) {
            jiv["samples"].push_back({{"t", s.t}, {"q", s.q}, {"tau", s.tau}, {"x", vec_to_json(s.x)}});
        }
        out["intervals"].push_back(std::move(jiv));
    }
    out["jumps"] = nlohmann::json::array();
    for (const auto& jr : sol.jumps) {
        out["jumps"].push_back({{"t", jr.t},
                                {"x_before", vec_to_json(jr.x_before)},
                                {"x_after", vec_to_json(jr.x_after)},
                                {"q_before", jr.q_before},
                                {"tau_before", jr.tau_before},
                                {"forced", jr.forced}});
    }
    return out;
}

sim::HybridSolution solution_from_json(const nlohmann::json& j) {
    sim::HybridSolution sol;
    try {
        for (const auto& jiv : j.at("intervals")) {
            sim::FlowInterval iv{jiv.at("t_start").get<double>(), jiv.at("t_end").get<double>(),
                                 jiv.at("j").get<int>(), {}};
            for (const auto& js : jiv.at("samples")) {
                iv.samples.push_back({js.at("t").get<double>(), vec_from_json(js.at("x")), js.at("q").get<int>(),
                                      js.at("tau").get<double>()});
            }
            sol.intervals.push_back(std::move(iv));
        }
        for (const auto& jj : j.at("jumps")) {
            sol.jumps.push_back({jj.at("t").get<double>(), vec_from_json(jj.at("x_before")),
                                 vec_from_json(jj.at("x_after")), jj.at("q_before").get<int>(),
                                 jj.at("tau_before").get<double>(), jj.at("forced").get<bool>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError(std::string("solution json: ") + e.what());
    }
    return sol;
}

}  // namespace reset_lab::io
