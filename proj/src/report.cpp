#include "renormlab/report.hpp"

#include <cmath>
#include <iomanip>
#include <locale>
#include <sstream>

#include <json.hpp>

namespace renormlab {

void Table::add(std::vector<Cell> row)
{
    if (row.size() != columns.size())
        throw std::invalid_argument("table " + name + ": row has " + std::to_string(row.size()) + " cells, expected " +
                                    std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

const char* to_string(Relation r)
{
    switch (r) {
    case Relation::AbsDiff:
        return "abs_diff";
    case Relation::Below:
        return "below";
    case Relation::AtLeast:
        return "at_least";
    case Relation::Above:
        return "above";
    case Relation::Holds:
        return "holds";
    }
    return "?";
}

bool evaluate(Relation r, double measured, double expected, double tolerance)
{
    switch (r) {
    case Relation::AbsDiff:
        return std::abs(measured - expected) <= tolerance;
    case Relation::Below:
        return measured < tolerance;
    case Relation::AtLeast:
        return measured >= expected;
    case Relation::Above:
        return measured > expected;
    case Relation::Holds:
        return measured != 0.0;
    }
    return false;
}

CheckRecord& VerificationReport::add(std::string name, std::string claim, double measured, double expected,
                                     double tolerance, Relation relation, std::string note)
{
    // NaN fails every relation
    const bool pass = !std::isnan(measured) && evaluate(relation, measured, expected, tolerance);
    records.push_back({std::move(name), std::move(claim), measured, expected, tolerance, relation, pass,
                       std::move(note)});
    return records.back();
}

CheckRecord& VerificationReport::check(std::string name, std::string claim, bool holds, std::string note)
{
    return add(std::move(name), std::move(claim), holds ? 1.0 : 0.0, 1.0, 0.0, Relation::Holds, std::move(note));
}

bool VerificationReport::pass() const
{
    for (const CheckRecord& r : records)
        if (!r.pass)
            return false;
    return true;
}

void VerificationReport::append(const VerificationReport& other)
{
    records.insert(records.end(), other.records.begin(), other.records.end());
}

Table VerificationReport::as_table() const
{
    Table t{"report", {"name", "claim", "measured", "expected", "tolerance", "relation", "pass", "note"}, {}};
    for (const CheckRecord& r : records)
        t.add({r.name, r.claim, r.measured, r.expected, r.tolerance, std::string(to_string(r.relation)), r.pass,
               r.note});
    return t;
}

std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(12) << x;
    return os.str();
}

namespace {

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_cell(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>)
                return csv_escape(v);
            else if constexpr (std::is_same_v<T, double>)
                return format_number(v);
            else if constexpr (std::is_same_v<T, bool>)
                return v ? "true" : "false";
            else
                return std::to_string(v);
        },
        c);
}

void write_table_csv(std::ostream& os, const Table& t)
{
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << csv_cell(row[i]);
        os << '\n';
    }
}

nlohmann::ordered_json json_cell(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v))
                    return format_number(v);
            }
            return v;
        },
        c);
}

}  // namespace

void write_csv(std::ostream& os, const CommandOutput& out)
{
    std::vector<Table> all = out.tables;
    if (out.has_report)
        all.push_back(out.report.as_table());
    // a lone table is written bare so its header is the first line
    const bool sections = all.size() > 1;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (sections) {
            if (i)
                os << '\n';
            os << "# " << all[i].name << '\n';
        }
        write_table_csv(os, all[i]);
    }
}

void write_json(std::ostream& os, const CommandOutput& out)
{
    nlohmann::ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = out.command;
    doc["config"] = out.config;
    nlohmann::ordered_json tables = nlohmann::ordered_json::object();
    for (const Table& t : out.tables) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            nlohmann::ordered_json r;
            for (std::size_t i = 0; i < row.size(); ++i)
                r[t.columns[i]] = json_cell(row[i]);
            rows.push_back(std::move(r));
        }
        tables[t.name] = std::move(rows);
    }
    doc["tables"] = std::move(tables);
    if (out.has_report) {
        nlohmann::ordered_json recs = nlohmann::ordered_json::array();
        for (const CheckRecord& r : out.report.records) {
            recs.push_back({{"name", r.name},
                            {"claim", r.claim},
                            {"measured", json_cell(r.measured)},
                            {"expected", json_cell(r.expected)},
                            {"tolerance", json_cell(r.tolerance)},
                            {"relation", to_string(r.relation)},
                            {"pass", r.pass},
                            {"note", r.note}});
        }
        doc["report"] = {{"pass", out.report.pass()}, {"records", std::move(recs)}};
    }
    os << doc.dump(2) << '\n';
}

}  // namespace renormlab
