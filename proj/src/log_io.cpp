#include "mfcbf/log_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mfcbf/error.hpp"

namespace mfcbf {

namespace fs = std::filesystem;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + p.string() + " for writing");
    return out;
}

void finish(std::ofstream& out, const fs::path& p) {
    out.flush();
    if (!out) throw IoError("failed writing " + p.string());
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    cells.push_back(cur);
    return cells;
}

double parse_double(const std::string& s, const std::string& where) {
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError("bad number \"" + s + "\" in " + where);
    }
}

std::vector<std::vector<std::string>> read_table(const std::string& path, std::string& header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    if (!std::getline(in, header)) throw IoError(path + " is empty");
    while (std::getline(in, line))
        if (!line.empty()) rows.push_back(split_csv(line));
    return rows;
}

}  // namespace

void write_log(const TrajectoryLog& log, const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());

    const int state_dim = log.config.dynamics().state_dim();
    const int control_dim = log.config.dynamics().control_dim();

    const fs::path traj_path = fs::path(dir) / "trajectory.csv";
    std::ofstream traj = open_out(traj_path);
    traj << "step,time,kind,agent_id";
    for (int c = 0; c < state_dim; ++c) traj << ",x" << c;
    for (int c = 0; c < control_dim; ++c) traj << ",u" << c;
    traj << '\n';
    for (const auto& r : log.records) {
        const std::string prefix = std::to_string(r.step) + "," + format_double(r.time);
        for (Eigen::Index i = 0; i < r.agents.cols(); ++i) {
            traj << prefix << ",swarm," << i;
            for (int c = 0; c < state_dim; ++c) traj << ',' << format_double(r.agents(c, i));
            for (int c = 0; c < control_dim; ++c) traj << ',' << format_double(r.controls(c, i));
            traj << '\n';
        }
        for (Eigen::Index j = 0; j < r.adversary.cols(); ++j) {
            traj << prefix << ",adversary," << j;
            for (int c = 0; c < state_dim; ++c) traj << ',' << format_double(r.adversary(c, j));
            for (int c = 0; c < control_dim; ++c) traj << ',';
            traj << '\n';
        }
    }
    finish(traj, traj_path);

    const fs::path bar_path = fs::path(dir) / "barrier.csv";
    std::ofstream bar = open_out(bar_path);
    bar << "step,time,h_value,residual,status,lambda,solve_ms\n";
    for (const auto& r : log.records)
        bar << r.step << ',' << format_double(r.time) << ',' << format_double(r.h_value) << ','
            << format_double(r.residual) << ',' << to_string(r.report.status) << ','
            << format_double(r.report.lambda) << ',' << format_double(r.solve_ms) << '\n';
    finish(bar, bar_path);

    const fs::path cfg_path = fs::path(dir) / "scenario.json";
    std::ofstream cfg = open_out(cfg_path);
    cfg << scenario_to_json(log.config);
    finish(cfg, cfg_path);
}

std::vector<TrajectoryRow> read_trajectory_csv(const std::string& path) {
    std::string header;
    const auto table = read_table(path, header);
    const auto cols = split_csv(header);
    int nx = 0, nu = 0;
    for (const auto& c : cols) {
        if (c.size() > 1 && c[0] == 'x') ++nx;
        if (c.size() > 1 && c[0] == 'u') ++nu;
    }
    std::vector<TrajectoryRow> out;
    out.reserve(table.size());
    for (std::size_t li = 0; li < table.size(); ++li) {
        const auto& cells = table[li];
        const std::string where = path + " line " + std::to_string(li + 2);
        if (cells.size() != cols.size()) throw IoError("wrong column count in " + where);
        TrajectoryRow r;
        r.step = static_cast<int>(parse_double(cells[0], where));
        r.time = parse_double(cells[1], where);
        r.kind = cells[2];
        r.agent_id = static_cast<int>(parse_double(cells[3], where));
        for (int c = 0; c < nx; ++c) r.state.push_back(parse_double(cells[4 + c], where));
        if (r.kind == "swarm")
            for (int c = 0; c < nu; ++c) r.control.push_back(parse_double(cells[4 + nx + c], where));
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<BarrierRow> read_barrier_csv(const std::string& path) {
    std::string header;
    const auto table = read_table(path, header);
    std::vector<BarrierRow> out;
    out.reserve(table.size());
    for (std::size_t li = 0; li < table.size(); ++li) {
        const auto& c = table[li];
        const std::string where = path + " line " + std::to_string(li + 2);
        if (c.size() != 7) throw IoError("wrong column count in " + where);
        out.push_back({static_cast<int>(parse_double(c[0], where)), parse_double(c[1], where),
                       parse_double(c[2], where), parse_double(c[3], where), c[4],
                       parse_double(c[5], where), parse_double(c[6], where)});
    }
    return out;
}

}  // namespace mfcbf
