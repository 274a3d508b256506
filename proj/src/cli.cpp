#include "splitenum/cli.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "splitenum/asymptotics.hpp"
#include "splitenum/oracle.hpp"

namespace splitenum::cli {

using grammars::CountTable;
using grammars::Flavor;
using grammars::GraphClassId;
using grammars::Rooting;
using json = nlohmann::ordered_json;

namespace {

std::vector<GraphClassId> classesOf(const JobSpec& spec)
{
    if (spec.classId)
        return {*spec.classId};
    return {GraphClassId::DH, GraphClassId::TLP};
}

// Writes to the requested file, or to `out` when no path was given.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : out_(&fallback)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw std::runtime_error("cannot open output file '" + path + "'");
            out_ = &file_;
        }
    }
    std::ostream& stream() { return *out_; }

private:
    std::ofstream file_;
    std::ostream* out_;
};

} // namespace

std::string formatTable(const CountTable& table, Format format)
{
    std::ostringstream os;
    switch (format) {
    case Format::Bfile:
        for (std::size_t n = 1; n < table.terms.size(); ++n)
            os << n << ' ' << table.terms[n].get_str() << '\n';
        break;
    case Format::Plain:
        for (std::size_t n = 1; n < table.terms.size(); ++n)
            os << table.terms[n].get_str() << (n + 1 < table.terms.size() ? ", " : "\n");
        break;
    case Format::Json: {
        json j;
        j["class"] = grammars::toString(table.classId);
        j["flavor"] = grammars::toString(table.flavor);
        j["rooting"] = grammars::toString(table.rooting);
        json terms = json::array();
        for (std::size_t n = 1; n < table.terms.size(); ++n)
            terms.push_back(table.terms[n].get_str());
        j["terms"] = std::move(terms);
        os << j.dump() << '\n';
        break;
    }
    }
    return os.str();
}

CountTable parseBfile(const std::string& text, GraphClassId id, Flavor flavor, Rooting rooting)
{
    CountTable table;
    table.classId = id;
    table.flavor = flavor;
    table.rooting = rooting;
    table.terms.push_back(0);
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        std::size_t n = 0;
        std::string value;
        if (!(ls >> n >> value))
            throw std::invalid_argument("malformed bfile line: '" + line + "'");
        if (n != table.terms.size())
            throw std::invalid_argument("bfile indices must run 1, 2, 3, ... (got " + std::to_string(n) + ")");
        table.terms.emplace_back(value);
    }
    table.meta.order = table.terms.size() - 1;
    table.meta.patched = true;
    for (std::size_t n = 1; n <= 2 && n < table.terms.size(); ++n)
        table.meta.patched = table.meta.patched && table.terms[n] == 1;
    return table;
}

int runEnumerate(const JobSpec& spec, std::ostream& out, std::ostream&)
{
    const CountTable table = grammars::enumerate(*spec.classId, spec.flavor, spec.rooting, spec.n, spec.variant);
    Sink sink(spec.output, out);
    sink.stream() << formatTable(table, spec.format);
    return kExitOk;
}

int runAsymptotics(const JobSpec& spec, std::ostream& out, std::ostream& err)
{
    using asymptotics::Real;
    using asymptotics::toDecimal;
    asymptotics::PrecisionScope scope(spec.workingDigits + 10);
    json report = json::array();
    std::ostringstream plain;
    int status = kExitOk;
    for (const GraphClassId id : classesOf(spec)) {
        asymptotics::Analysis a;
        try {
            a = asymptotics::analyze(id, spec.workingDigits);
        } catch (const asymptotics::CancellationFailed& e) {
            err << "error: " << e.what() << '\n';
            status = kExitFailure;
            continue;
        }
        const int d = spec.digits;
        const Real identity = id == GraphClassId::DH
                                  ? asymptotics::dhEliminant(a.branch.rho, a.branch.tau)
                                  : Real(a.branch.tau - 1 + a.branch.rho / (1 - a.branch.rho));
        std::vector<std::pair<std::string, std::string>> rows = {
            {"gamma", toDecimal(a.unrootedEstimate.growthRate, d)},
            {"rho", toDecimal(a.branch.rho, d)},
            {"tau", toDecimal(a.rooted.tau, d)},
            {"c", toDecimal(a.rooted.c, d)},
            {"d", toDecimal(a.rooted.d, d)},
            {"e", toDecimal(a.rooted.e, d)},
            {"tau_prime", toDecimal(a.unrooted.tauPrime, d)},
            {"c_prime", toDecimal(a.unrooted.cPrime, 3)},
            {"d_prime", toDecimal(a.unrooted.dPrime, d)},
            {"e_prime", toDecimal(a.unrooted.ePrime, d)},
            {"G_y", toDecimal(a.unrooted.gY, 3)},
            {"branch_identity", toDecimal(identity, 3)},
            {"unrooted_constant", toDecimal(a.unrootedEstimate.constant, d)},
            {"rooted_constant", toDecimal(a.rootedEstimate.constant, d)},
            {"residual_F", toDecimal(a.branch.residualF, 3)},
            {"residual_Fy", toDecimal(a.branch.residualFy, 3)},
            {"truncation_m", std::to_string(a.truncation)},
        };
        json j;
        j["class"] = grammars::toString(id);
        j["digits"] = d;
        j["working_digits"] = spec.workingDigits;
        plain << "class " << grammars::toString(id) << '\n';
        for (const auto& [k, v] : rows) {
            j[k] = v;
            plain << "  " << std::left << std::setw(18) << k << v << '\n';
        }
        plain << "  unrooted: a_n ~ " << toDecimal(a.unrootedEstimate.constant, d) << " * "
              << toDecimal(a.unrootedEstimate.growthRate, d) << "^n * n^(-5/2)\n";
        report.push_back(std::move(j));
    }
    Sink sink(spec.output, out);
    if (spec.format == Format::Json)
        sink.stream() << report.dump(2) << '\n';
    else
        sink.stream() << plain.str();
    return status;
}

int runCrosscheck(const JobSpec& spec, std::ostream& out, std::ostream&)
{
    std::ostringstream os;
    bool ok = true;
    const int maxN = spec.maxN;
    auto row = [&](const std::string& what, int n, const BigInt& oracle, const BigInt& grammar) {
        const bool match = oracle == grammar;
        ok = ok && match;
        os << std::left << std::setw(22) << what << std::right << std::setw(3) << n << std::setw(10)
           << oracle.get_str() << std::setw(10) << grammar.get_str() << "  " << (match ? "MATCH" : "MISMATCH")
           << '\n';
    };
    os << std::left << std::setw(22) << "check" << std::right << std::setw(3) << "n" << std::setw(10) << "oracle"
       << std::setw(10) << "grammar" << '\n';
    for (const GraphClassId id : classesOf(spec)) {
        const std::string name = grammars::toString(id);
        const auto unlabeled = grammars::enumerate(id, Flavor::Unlabeled, Rooting::Unrooted,
                                                   static_cast<std::size_t>(maxN), spec.variant);
        for (int n = 1; n <= maxN; ++n)
            row(name + " unlabeled", n, BigInt(oracle::generateAll(id, n).size()),
                unlabeled.terms[static_cast<std::size_t>(n)]);
        const int labeledMax = std::min(maxN, oracle::kMaxExhaustive);
        const auto labeled = grammars::enumerate(id, Flavor::Labeled, Rooting::Unrooted,
                                                 static_cast<std::size_t>(labeledMax), spec.variant);
        for (int n = 1; n <= labeledMax; ++n)
            row(name + " labeled", n, oracle::countLabeled(id, n, oracle::CountMode::ExhaustiveFilter),
                labeled.terms[static_cast<std::size_t>(n)]);
    }
    std::size_t graphs = 0, agree = 0, dh = 0;
    for (int n = 1; n <= std::min(maxN, 7); ++n)
        for (const auto& key : oracle::connectedGraphs(n)) {
            const auto g = key.graph();
            const bool a = oracle::isDHbySplits(g);
            const bool b = oracle::isDHbyPruning(g);
            ++graphs;
            agree += a == b;
            dh += a;
        }
    const bool recognizersAgree = agree == graphs;
    ok = ok && recognizersAgree;
    os << "recognizers: " << agree << "/" << graphs << " connected graphs with n <= " << std::min(maxN, 7)
       << " agree (" << dh << " distance-hereditary)  " << (recognizersAgree ? "MATCH" : "MISMATCH") << '\n';
    os << (ok ? "all checks MATCH" : "MISMATCH found") << '\n';
    Sink sink(spec.output, out);
    sink.stream() << os.str();
    return ok ? kExitOk : kExitFailure;
}

int runExport(const JobSpec& spec, std::ostream& out, std::ostream&)
{
    Sink sink(spec.output, out);
    sink.stream() << oracle::dumpGraphs(oracle::generateAll(*spec.classId, static_cast<int>(spec.n)));
    return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact enumeration and asymptotics of distance-hereditary and 3-leaf power graphs"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    const std::map<std::string, GraphClassId> classes{{"dh", GraphClassId::DH}, {"3lp", GraphClassId::TLP}};
    const std::map<std::string, Flavor> flavors{{"labeled", Flavor::Labeled}, {"unlabeled", Flavor::Unlabeled}};
    const std::map<std::string, Rooting> rootings{{"rooted", Rooting::Rooted}, {"unrooted", Rooting::Unrooted}};
    const std::map<std::string, Format> formats{{"plain", Format::Plain}, {"json", Format::Json}, {"bfile", Format::Bfile}};
    const std::map<std::string, Format> reportFormats{{"plain", Format::Plain}, {"json", Format::Json}};

    JobSpec spec;
    GraphClassId cls = GraphClassId::DH;

    auto* en = app.add_subcommand("enumerate", "Counting sequence a(1..n)");
    en->add_option("--class", cls, "Graph class")->required()->transform(CLI::CheckedTransformer(classes, CLI::ignore_case));
    en->add_option("--flavor", spec.flavor, "labeled or unlabeled")->transform(CLI::CheckedTransformer(flavors, CLI::ignore_case));
    en->add_option("--rooting", spec.rooting, "rooted or unrooted")->transform(CLI::CheckedTransformer(rootings, CLI::ignore_case));
    en->add_option("--n", spec.n, "Number of terms")->required()->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
    en->add_option("--format", spec.format, "plain, json or bfile")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    en->add_option("--output", spec.output, "Output file (default: standard output)");
    en->add_option("--variant", spec.variant, "Grammar variant");

    auto* as = app.add_subcommand("asymptotics", "Branch point, singular expansions and constants");
    auto* asClass = as->add_option("--class", cls, "Graph class (default: both)")->transform(CLI::CheckedTransformer(classes, CLI::ignore_case));
    as->add_option("--digits", spec.digits, "Reported significant digits")->check(CLI::Range(1, 40));
    as->add_option("--precision", spec.workingDigits, "Working precision in decimal digits")->check(CLI::Range(30, 200));
    as->add_option("--format", spec.format, "plain or json")->transform(CLI::CheckedTransformer(reportFormats, CLI::ignore_case));
    as->add_option("--output", spec.output, "Output file (default: standard output)");

    auto* cc = app.add_subcommand("crosscheck", "Grammar counts against exhaustive generation");
    auto* ccClass = cc->add_option("--class", cls, "Graph class (default: both)")->transform(CLI::CheckedTransformer(classes, CLI::ignore_case));
    cc->add_option("--max-n", spec.maxN, "Largest graph size")->check(CLI::Range(1, oracle::kMaxGeneration));
    cc->add_option("--variant", spec.variant, "Grammar variant");
    cc->add_option("--output", spec.output, "Output file (default: standard output)");

    auto* ex = app.add_subcommand("export", "Dump all graphs of a class on n vertices");
    ex->add_option("--class", cls, "Graph class")->required()->transform(CLI::CheckedTransformer(classes, CLI::ignore_case));
    ex->add_option("--n", spec.n, "Vertex count")->required()->check(CLI::Range(std::size_t{1}, static_cast<std::size_t>(oracle::kMaxGeneration)));
    ex->add_option("--output", spec.output, "Output file (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return e.get_exit_code() == 0 ? app.exit(e, out, err) : (app.exit(e, out, err), kExitUsage);
    }

    try {
        if (en->parsed()) {
            spec.command = Command::Enumerate;
            spec.classId = cls;
        } else if (as->parsed()) {
            spec.command = Command::Asymptotics;
            if (asClass->count())
                spec.classId = cls;
        } else if (cc->parsed()) {
            spec.command = Command::Crosscheck;
            if (ccClass->count())
                spec.classId = cls;
        } else {
            spec.command = Command::Export;
            spec.classId = cls;
        }
        if (spec.command == Command::Enumerate || spec.command == Command::Crosscheck) {
            for (const GraphClassId id : classesOf(spec)) {
                const auto known = grammars::knownVariants(id, Rooting::Unrooted);
                if (std::find(known.begin(), known.end(), spec.variant) == known.end()) {
                    err << "error: unknown grammar variant '" << spec.variant << "' for class "
                        << grammars::toString(id) << '\n';
                    return kExitUsage;
                }
            }
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        switch (spec.command) {
        case Command::Enumerate:
            return runEnumerate(spec, out, err);
        case Command::Asymptotics:
            return runAsymptotics(spec, out, err);
        case Command::Crosscheck:
            return runCrosscheck(spec, out, err);
        case Command::Export:
            return runExport(spec, out, err);
        }
    } catch (const grammars::UnknownVariant& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}

} // namespace splitenum::cli
