#pragma once
// Dataset CSV schemas and loaders.
//
//   tasks.csv:      id,budget,skills,arrival,duration
//   volunteers.csv: id,expense,skills,arrival,departure,willingness,bias,rating
//
// Header row required; `skills` cells are '|'-separated identifiers; ','
// delimiter, '.' decimal point, UTF-8, LF line endings.

#include "wcb/domain.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace wcb {

// Parse/validation failure (bad header, malformed cell, invariant violation).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// I/O failure (missing file, unwritable path).
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct Dataset {
    SkillCatalog catalog;          // union of all skills seen, sorted
    std::vector<Task> tasks;       // masks attached
    std::vector<Volunteer> volunteers;
    std::vector<std::string> warnings; // e.g. dropped duplicate ids
};

std::vector<Task> parse_tasks_csv(const std::string& text, const std::string& source_name,
                                  std::vector<std::string>* warnings);
std::vector<Volunteer> parse_volunteers_csv(const std::string& text,
                                            const std::string& source_name,
                                            std::vector<std::string>* warnings);

// Loads both files, drops duplicate ids (keeping the first occurrence, with a
// warning), builds the catalog from the union of observed skills, validates
// every invariant and attaches masks. Throws DataError when the validation
// report is non-empty, IoError when a file cannot be read.
Dataset load_dataset(const std::string& tasks_path, const std::string& volunteers_path);

std::string tasks_to_csv(std::span<const Task> tasks);
std::string volunteers_to_csv(std::span<const Volunteer> volunteers);

std::string read_file(const std::string& path);              // IoError on failure
void write_file(const std::string& path, const std::string& content);

// Deterministic shortest-ish formatting used by every CSV writer.
std::string format_double(double v);

} // namespace wcb
