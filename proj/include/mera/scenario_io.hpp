#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "mera/model.hpp"

namespace mera {

inline constexpr int schema_version = 1;

class ParseError : public std::runtime_error {
public:
    ParseError(std::string file, std::size_t line, std::size_t column, const std::string& message);

    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::string file_;
    std::size_t line_;
    std::size_t column_;
};

// Scenario directory layout.
struct ScenarioFiles {
    std::filesystem::path topology;  // topology.json
    std::filesystem::path services;  // services.csv
    std::filesystem::path iot;       // iot_profile.csv
    std::filesystem::path mobility;  // mobility.csv

    static ScenarioFiles in(const std::filesystem::path& dir);
};

Scenario load_scenario(const ScenarioFiles& files);
void save_scenario(const Scenario& scenario, const ScenarioFiles& files);

// Individual readers, exposed for tests. `name` is used in diagnostics.
void parse_topology(const std::string& text, const std::string& name, Scenario& out);
std::string write_topology(const Scenario& scenario);
std::vector<Service> parse_services(const std::string& text, const std::string& name);
std::vector<std::unordered_map<std::string, double>> parse_iot_profiles(const std::string& text,
                                                                         const std::string& name);
std::vector<std::vector<MobilityTrace>> parse_mobility(const std::string& text, const std::string& name);
std::string write_services(const std::vector<Service>& services);
std::string write_iot_profiles(const std::vector<std::unordered_map<std::string, double>>& profiles);
std::string write_mobility(const std::vector<std::vector<MobilityTrace>>& traces);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

} // namespace mera
