// uavgan - cooperative generative channel modeling for UAV mmWave networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavgan/common.hpp"
#include "uavgan/environment.hpp"
#include "uavgan/graph.hpp"
#include "uavgan/histogram.hpp"
#include "uavgan/learning.hpp"

namespace uavgan {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shortest decimal form that parses back to the identical double.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double back = std::strtod(buf, nullptr);
    if (back == v) {
        for (int prec = 1; prec <= 16; ++prec) {
            char shorter[64];
            std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
            if (std::strtod(shorter, nullptr) == v) return shorter;
        }
    }
    return buf;
}

// ---------------------------------------------------------------------------
// Generic CSV table with '#' comment header lines for parameter echoes.
// ---------------------------------------------------------------------------

struct CsvTable {
    std::map<std::string, std::string> params;  // echoed "# key=value" lines
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw IoError("csv: missing column '" + name + "'");
    }
};

inline void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    for (const auto& [k, v] : table.params) out << "# " << k << "=" << v << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << "\n";
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw IoError("csv: row width mismatch while writing " + path);
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    if (!out) throw IoError("write failure: " + path);
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    CsvTable table;
    std::string line;
    bool have_header = false;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cur;
        for (char ch : s) {
            if (ch == ',') {
                cells.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(ch);
            }
        }
        cells.push_back(cur);
        return cells;
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto body = line.substr(line.find_first_not_of("# "));
            const auto eq = body.find('=');
            if (eq != std::string::npos)
                table.params[body.substr(0, eq)] = body.substr(eq + 1);
            continue;
        }
        if (!have_header) {
            table.columns = split(line);
            have_header = true;
        } else {
            table.rows.push_back(split(line));
        }
    }
    if (!have_header) throw IoError("csv: no header in " + path);
    return table;
}

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& dataset_columns() {
    static const std::vector<std::string> cols = {
        "owner", "x",    "y",       "z_uav",   "x_ue",    "y_ue",
        "z_ue",  "t",    "re_gain", "im_gain", "cond_idx"};
    return cols;
}

inline CsvTable datasets_to_table(const std::vector<Dataset>& sets) {
    CsvTable t;
    t.columns = dataset_columns();
    for (const auto& ds : sets) {
        for (const auto& s : ds.samples) {
            t.rows.push_back({std::to_string(ds.owner_id), format_double(s.uav_pos.x),
                              format_double(s.uav_pos.y), format_double(s.uav_pos.z),
                              format_double(s.ue_pos.x), format_double(s.ue_pos.y),
                              format_double(s.ue_pos.z), format_double(s.time),
                              format_double(s.gain_est.real()),
                              format_double(s.gain_est.imag()),
                              std::to_string(s.condition_idx)});
        }
    }
    return t;
}

inline void write_datasets_csv(const std::string& path,
                               const std::vector<Dataset>& sets) {
    write_csv(path, datasets_to_table(sets));
}

inline std::vector<Dataset> read_datasets_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    if (t.columns != dataset_columns()) throw IoError("dataset csv: wrong columns");
    std::map<int, Dataset> by_owner;
    for (const auto& row : t.rows) {
        const int owner = std::stoi(row[0]);
        ChannelSample s;
        s.uav_pos = {std::strtod(row[1].c_str(), nullptr),
                     std::strtod(row[2].c_str(), nullptr),
                     std::strtod(row[3].c_str(), nullptr)};
        s.ue_pos = {std::strtod(row[4].c_str(), nullptr),
                    std::strtod(row[5].c_str(), nullptr),
                    std::strtod(row[6].c_str(), nullptr)};
        s.time = std::strtod(row[7].c_str(), nullptr);
        s.gain_est = {std::strtod(row[8].c_str(), nullptr),
                      std::strtod(row[9].c_str(), nullptr)};
        s.condition_idx = std::stoi(row[10]);
        auto& ds = by_owner[owner];
        ds.owner_id = owner;
        ds.samples.push_back(s);
    }
    std::vector<Dataset> out;
    for (auto& [id, ds] : by_owner) out.push_back(std::move(ds));
    return out;
}

inline nlohmann::json datasets_to_json(const std::vector<Dataset>& sets) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& ds : sets) {
        nlohmann::json samples = nlohmann::json::array();
        for (const auto& s : ds.samples) {
            samples.push_back({{"uav", {s.uav_pos.x, s.uav_pos.y, s.uav_pos.z}},
                               {"ue", {s.ue_pos.x, s.ue_pos.y, s.ue_pos.z}},
                               {"t", s.time},
                               {"re_gain", s.gain_est.real()},
                               {"im_gain", s.gain_est.imag()},
                               {"cond_idx", s.condition_idx}});
        }
        arr.push_back({{"owner", ds.owner_id},
                       {"size", ds.size()},
                       {"samples", std::move(samples)}});
    }
    return arr;
}

inline std::vector<Dataset> datasets_from_json(const nlohmann::json& arr) {
    std::vector<Dataset> out;
    for (const auto& dj : arr) {
        Dataset ds;
        ds.owner_id = dj.at("owner").get<int>();
        for (const auto& sj : dj.at("samples")) {
            ChannelSample s;
            const auto& u = sj.at("uav");
            const auto& e = sj.at("ue");
            s.uav_pos = {u.at(0).get<double>(), u.at(1).get<double>(),
                         u.at(2).get<double>()};
            s.ue_pos = {e.at(0).get<double>(), e.at(1).get<double>(),
                        e.at(2).get<double>()};
            s.time = sj.at("t").get<double>();
            s.gain_est = {sj.at("re_gain").get<double>(),
                          sj.at("im_gain").get<double>()};
            s.condition_idx = sj.at("cond_idx").get<int>();
            ds.samples.push_back(s);
        }
        if (ds.size() != dj.at("size").get<int>())
            throw IoError("dataset json: size field disagrees with samples");
        out.push_back(std::move(ds));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

inline nlohmann::json graph_to_json(const UavGraph& g) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : g.nodes) {
        nodes.push_back({{"id", n.id},
                         {"position", {n.position.x, n.position.y, n.position.z}},
                         {"dataset_size", n.dataset_size},
                         {"out_budget", n.out_budget},
                         {"max_power_w", n.max_power_w}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.edges) {
        edges.push_back({{"src", e.src},
                         {"dst", e.dst},
                         {"power_w", e.tx_power_w},
                         {"rate_bps", e.rate_bps},
                         {"snr_db", linear_to_db(e.snr)},
                         {"path_gain", e.path_gain},
                         {"bandwidth_hz", e.bandwidth_hz},
                         {"noise_power_w", e.noise_power_w}});
    }
    return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

inline UavGraph graph_from_json(const nlohmann::json& j) {
    std::vector<UavNode> nodes;
    for (const auto& nj : j.at("nodes")) {
        UavNode n;
        n.id = nj.at("id").get<int>();
        const auto& p = nj.at("position");
        n.position = {p.at(0).get<double>(), p.at(1).get<double>(),
                      p.at(2).get<double>()};
        n.dataset_size = nj.at("dataset_size").get<int>();
        n.out_budget = nj.at("out_budget").get<int>();
        n.max_power_w = nj.at("max_power_w").get<double>();
        nodes.push_back(n);
    }
    std::vector<LinkBudget> edges;
    for (const auto& ej : j.at("edges")) {
        LinkBudget e;
        e.src = ej.at("src").get<int>();
        e.dst = ej.at("dst").get<int>();
        e.tx_power_w = ej.at("power_w").get<double>();
        e.rate_bps = ej.at("rate_bps").get<double>();
        e.path_gain = ej.at("path_gain").get<double>();
        e.bandwidth_hz = ej.at("bandwidth_hz").get<double>();
        e.noise_power_w = ej.at("noise_power_w").get<double>();
        e.snr = e.tx_power_w * e.path_gain / e.noise_power_w;
        edges.push_back(e);
    }
    return UavGraph::from_edges(std::move(nodes), std::move(edges));
}

// ---------------------------------------------------------------------------
// Models (sparse bin tables)
// ---------------------------------------------------------------------------

inline nlohmann::json model_to_json(const GenerativeModel& model, const BinGrid& grid) {
    nlohmann::json gj = {{"uav_range",
                          {grid.uav_range.lo.x, grid.uav_range.lo.y, grid.uav_range.lo.z,
                           grid.uav_range.hi.x, grid.uav_range.hi.y, grid.uav_range.hi.z}},
                         {"ue_range",
                          {grid.ue_range.lo.x, grid.ue_range.lo.y, grid.ue_range.lo.z,
                           grid.ue_range.hi.x, grid.ue_range.hi.y, grid.ue_range.hi.z}},
                         {"t", {grid.t_lo, grid.t_hi}},
                         {"gain", {grid.gain_lo, grid.gain_hi}},
                         {"spatial_bins", grid.spatial_bins},
                         {"time_bins", grid.time_bins},
                         {"gain_bins", grid.gain_bins}};
    // canonical entry order for byte-stable output
    std::vector<std::pair<BinKey, double>> entries(model.table.w.begin(),
                                                   model.table.w.end());
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.first.cond != b.first.cond) return a.first.cond < b.first.cond;
        return a.first.axis < b.first.axis;
    });
    nlohmann::json ej = nlohmann::json::array();
    for (const auto& [k, v] : entries) {
        nlohmann::json bins = nlohmann::json::array();
        for (auto b : k.axis) bins.push_back(b);
        ej.push_back({{"cond", k.cond}, {"bins", std::move(bins)}, {"w", v}});
    }
    return {{"grid", std::move(gj)},
            {"absorbed_mass", model.absorbed_mass},
            {"entries", std::move(ej)}};
}

inline GenerativeModel model_from_json(const nlohmann::json& j, BinGrid* grid_out = nullptr) {
    if (grid_out) {
        const auto& gj = j.at("grid");
        const auto& ur = gj.at("uav_range");
        const auto& er = gj.at("ue_range");
        grid_out->uav_range = {{ur.at(0), ur.at(1), ur.at(2)},
                               {ur.at(3), ur.at(4), ur.at(5)}};
        grid_out->ue_range = {{er.at(0), er.at(1), er.at(2)},
                              {er.at(3), er.at(4), er.at(5)}};
        grid_out->t_lo = gj.at("t").at(0);
        grid_out->t_hi = gj.at("t").at(1);
        grid_out->gain_lo = gj.at("gain").at(0);
        grid_out->gain_hi = gj.at("gain").at(1);
        grid_out->spatial_bins = gj.at("spatial_bins");
        grid_out->time_bins = gj.at("time_bins");
        grid_out->gain_bins = gj.at("gain_bins");
    }
    GenerativeModel m;
    m.absorbed_mass = j.at("absorbed_mass").get<double>();
    for (const auto& ej : j.at("entries")) {
        BinKey k;
        k.cond = static_cast<std::int16_t>(ej.at("cond").get<int>());
        const auto& bins = ej.at("bins");
        for (std::size_t a = 0; a < k.axis.size(); ++a)
            k.axis[a] = static_cast<std::int16_t>(bins.at(a).get<int>());
        m.table.w[k] = ej.at("w").get<double>();
    }
    return m;
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failure: " + path);
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("json parse failure in ") + path + ": " + e.what());
    }
    return j;
}

/// Convert a CSV-style table to a JSON array of row objects (the --format
/// json variant of every tabular output).
inline nlohmann::json table_to_json(const CsvTable& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json obj;
        for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = row[i];
        rows.push_back(std::move(obj));
    }
    nlohmann::json params;
    for (const auto& [k, v] : t.params) params[k] = v;
    return {{"params", std::move(params)}, {"rows", std::move(rows)}};
}

}  // namespace uavgan
