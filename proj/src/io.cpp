#include "wcb/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace wcb {

namespace {

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::vector<std::string> split_skills(const std::string& cell) {
    std::vector<std::string> out;
    if (cell.empty()) return out;
    for (auto& s : split(cell, '|'))
        if (!s.empty()) out.push_back(std::move(s));
    return out;
}

double parse_number(const std::string& cell, const std::string& source, std::size_t line_no,
                    const char* field) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw DataError(source + ":" + std::to_string(line_no) + ": cannot parse " + field +
                        " value '" + cell + "'");
    return value;
}

struct CsvReader {
    std::string source;
    std::vector<std::string> lines;

    CsvReader(const std::string& text, std::string name) : source(std::move(name)) {
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t pos = text.find('\n', start);
            if (pos == std::string::npos) pos = text.size();
            std::string line = text.substr(start, pos - start);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines.push_back(std::move(line));
            start = pos + 1;
        }
        while (!lines.empty() && lines.back().empty()) lines.pop_back();
    }

    void expect_header(const std::string& expected) {
        if (lines.empty() || lines[0] != expected)
            throw DataError(source + ": missing or malformed header (expected '" + expected +
                            "')");
    }
};

} // namespace

std::vector<Task> parse_tasks_csv(const std::string& text, const std::string& source_name,
                                  std::vector<std::string>* warnings) {
    CsvReader reader(text, source_name);
    reader.expect_header("id,budget,skills,arrival,duration");
    std::vector<Task> tasks;
    std::set<std::string> seen;
    for (std::size_t i = 1; i < reader.lines.size(); ++i) {
        const auto& line = reader.lines[i];
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split(line, ',');
        if (cells.size() != 5)
            throw DataError(source_name + ":" + std::to_string(i + 1) +
                            ": expected 5 columns, got " + std::to_string(cells.size()));
        Task t;
        t.id = cells[0];
        t.budget = parse_number(cells[1], source_name, i + 1, "budget");
        t.skill_names = split_skills(cells[2]);
        t.arrival_time = parse_number(cells[3], source_name, i + 1, "arrival");
        t.duration = parse_number(cells[4], source_name, i + 1, "duration");
        if (!seen.insert(t.id).second) {
            if (warnings)
                warnings->push_back(source_name + ":" + std::to_string(i + 1) +
                                    ": duplicate task id '" + t.id + "' dropped (first kept)");
            continue;
        }
        tasks.push_back(std::move(t));
    }
    return tasks;
}

std::vector<Volunteer> parse_volunteers_csv(const std::string& text,
                                            const std::string& source_name,
                                            std::vector<std::string>* warnings) {
    CsvReader reader(text, source_name);
    reader.expect_header("id,expense,skills,arrival,departure,willingness,bias,rating");
    std::vector<Volunteer> vols;
    std::set<std::string> seen;
    for (std::size_t i = 1; i < reader.lines.size(); ++i) {
        const auto& line = reader.lines[i];
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split(line, ',');
        if (cells.size() != 8)
            throw DataError(source_name + ":" + std::to_string(i + 1) +
                            ": expected 8 columns, got " + std::to_string(cells.size()));
        Volunteer v;
        v.id = cells[0];
        v.expense = parse_number(cells[1], source_name, i + 1, "expense");
        v.skill_names = split_skills(cells[2]);
        v.arrival_time = parse_number(cells[3], source_name, i + 1, "arrival");
        v.departure_time = parse_number(cells[4], source_name, i + 1, "departure");
        v.willingness = parse_number(cells[5], source_name, i + 1, "willingness");
        v.bias = parse_number(cells[6], source_name, i + 1, "bias");
        v.rating = parse_number(cells[7], source_name, i + 1, "rating");
        if (!seen.insert(v.id).second) {
            if (warnings)
                warnings->push_back(source_name + ":" + std::to_string(i + 1) +
                                    ": duplicate volunteer id '" + v.id +
                                    "' dropped (first kept)");
            continue;
        }
        vols.push_back(std::move(v));
    }
    return vols;
}

Dataset load_dataset(const std::string& tasks_path, const std::string& volunteers_path) {
    Dataset ds;
    ds.tasks = parse_tasks_csv(read_file(tasks_path), tasks_path, &ds.warnings);
    ds.volunteers =
        parse_volunteers_csv(read_file(volunteers_path), volunteers_path, &ds.warnings);

    std::set<std::string> skills;
    for (const auto& t : ds.tasks) skills.insert(t.skill_names.begin(), t.skill_names.end());
    for (const auto& v : ds.volunteers)
        skills.insert(v.skill_names.begin(), v.skill_names.end());
    if (skills.empty())
        throw DataError(tasks_path + ": dataset defines no skills at all");
    ds.catalog = SkillCatalog(std::vector<std::string>(skills.begin(), skills.end()));

    auto issues = validate_world(ds.catalog, ds.tasks, ds.volunteers);
    if (!issues.empty()) {
        std::string msg = "dataset validation failed:";
        for (const auto& is : issues)
            msg += "\n  " + is.entity + " '" + is.id + "': " + is.message;
        throw DataError(msg);
    }
    attach_masks(ds.catalog, ds.tasks, ds.volunteers);
    return ds;
}

namespace {
std::string join_skills(std::span<const std::string> names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += '|';
        out += names[i];
    }
    return out;
}
} // namespace

std::string format_double(double v) {
    char buf[40];
    // %.17g round-trips doubles exactly; trim to the shortest form that does.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) break;
    }
    return buf;
}

std::string tasks_to_csv(std::span<const Task> tasks) {
    std::string out = "id,budget,skills,arrival,duration\n";
    for (const auto& t : tasks) {
        out += t.id;
        out += ',';
        out += format_double(t.budget);
        out += ',';
        out += join_skills(t.skill_names);
        out += ',';
        out += format_double(t.arrival_time);
        out += ',';
        out += format_double(t.duration);
        out += '\n';
    }
    return out;
}

std::string volunteers_to_csv(std::span<const Volunteer> volunteers) {
    std::string out = "id,expense,skills,arrival,departure,willingness,bias,rating\n";
    for (const auto& v : volunteers) {
        out += v.id;
        out += ',';
        out += format_double(v.expense);
        out += ',';
        out += join_skills(v.skill_names);
        out += ',';
        out += format_double(v.arrival_time);
        out += ',';
        out += format_double(v.departure_time);
        out += ',';
        out += format_double(v.willingness);
        out += ',';
        out += format_double(v.bias);
        out += ',';
        out += format_double(v.rating);
        out += '\n';
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("write to '" + path + "' failed");
}

} // namespace wcb
