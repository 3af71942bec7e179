#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace renormlab {

using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

/// How measured is compared with expected and tolerance.
enum class Relation {
    AbsDiff,    // |measured - expected| <= tolerance
    Below,      // measured < tolerance
    AtLeast,    // measured >= expected
    Above,      // measured > expected
    Holds,      // measured != 0 (boolean checks)
};

const char* to_string(Relation r);

struct CheckRecord {
    std::string name;
    std::string claim;  // the statement being checked
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    Relation relation = Relation::AbsDiff;
    bool pass = false;
    std::string note;
};

bool evaluate(Relation r, double measured, double expected, double tolerance);

struct VerificationReport {
    std::vector<CheckRecord> records;

    /// Appends a record with pass computed from the relation.
    CheckRecord& add(std::string name, std::string claim, double measured, double expected, double tolerance,
                     Relation relation, std::string note = {});
    CheckRecord& check(std::string name, std::string claim, bool holds, std::string note = {});

    bool pass() const;
    void append(const VerificationReport& other);
    Table as_table() const;
};

/// Everything a command produces.
struct CommandOutput {
    std::string command;
    std::map<std::string, std::string> config;
    std::vector<Table> tables;
    VerificationReport report;
    bool has_report = false;

    bool pass() const { return !has_report || report.pass(); }
};

inline constexpr int kSchemaVersion = 1;

/// '.' decimal point and 12 significant digits, independent of the global locale.
std::string format_number(double x);

void write_csv(std::ostream& os, const CommandOutput& out);
void write_json(std::ostream& os, const CommandOutput& out);

}  // namespace renormlab
