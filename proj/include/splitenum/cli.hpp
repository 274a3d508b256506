#ifndef SPLITENUM_CLI_HPP
#define SPLITENUM_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "splitenum/grammars.hpp"

namespace splitenum::cli {

enum class Command { Enumerate, Asymptotics, Crosscheck, Export };
enum class Format { Plain, Json, Bfile };

struct JobSpec {
    Command command = Command::Enumerate;
    std::optional<grammars::GraphClassId> classId; // unset: both classes where allowed
    grammars::Flavor flavor = grammars::Flavor::Unlabeled;
    grammars::Rooting rooting = grammars::Rooting::Unrooted;
    std::size_t n = 0;
    int maxN = 8;
    int digits = 10;        // reported significant digits
    int workingDigits = 50; // asymptotics precision
    Format format = Format::Plain;
    std::string output;     // empty: standard output
    std::string variant = "default";
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Parses flags and runs the command; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int runEnumerate(const JobSpec& spec, std::ostream& out, std::ostream& err);
int runAsymptotics(const JobSpec& spec, std::ostream& out, std::ostream& err);
int runCrosscheck(const JobSpec& spec, std::ostream& out, std::ostream& err);
int runExport(const JobSpec& spec, std::ostream& out, std::ostream& err);

std::string formatTable(const grammars::CountTable& table, Format format);

/// Reads "n a(n)" lines starting at n = 1 (blank lines and '#' comments skipped).
grammars::CountTable parseBfile(const std::string& text, grammars::GraphClassId id, grammars::Flavor flavor,
                                grammars::Rooting rooting);

} // namespace splitenum::cli

#endif
