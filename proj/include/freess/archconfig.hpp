#pragma once

#include <array>
#include <string>
#include <vector>

#include "freess/isa.hpp"

namespace freess {

enum class StreamMode { ForcedLoop, Semantic };
enum class SpecPolicy { AlwaysTaken, BackwardTaken };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Every architectural parameter of the simulated machine. Immutable after
// construction; the defaults are the shipped 4-wide configuration.
struct ArchConfig {
    int fetch_width = 4;
    int decode_width = 4;
    int dispatch_width = 4;
    int issue_width = 4;
    int commit_width = 4;

    int iw_slots = 8;
    int rob_slots = 8;
    int lq_slots = 4;
    int sq_slots = 4;

    int num_logical_regs = 8;
    int num_phys_regs = 16;

    // Indexed by FuClass: A M L S B F X.
    std::array<int, kNumFuClasses> fu_count{1, 1, 1, 1, 1, 1, 1};
    std::array<int, kNumFuClasses> fu_latency{1, 4, 2, 1, 1, 3, 5};

    bool issue_execute_same_cycle = true;
    bool wakeup_same_cycle_as_writeback = true;

    int iterations = 3;
    StreamMode stream_mode = StreamMode::ForcedLoop;
    SpecPolicy spec_policy = SpecPolicy::AlwaysTaken;

    int memory_size_bytes = 65536;

    std::string dump_path;
    bool batch_mode = false;

    int count(FuClass c) const { return fu_count[static_cast<size_t>(c)]; }
    int latency(FuClass c) const { return fu_latency[static_cast<size_t>(c)]; }

    // Throws ConfigError naming the offending parameter.
    void validate() const;
};

// Everything parse_args produces beyond the ArchConfig itself.
struct CliOptions {
    ArchConfig cfg;
    std::string program_path;  // empty when an example is selected
    int example = 0;           // 1..3, 0 = none
    bool verify = false;
    bool help = false;
    std::string mem_file;
    std::string reg_file;
};

// Parse "-flag value" pairs plus one positional program path (or -ex K).
// Throws ConfigError on unknown flags, bad values, or invariant violations.
CliOptions parse_args(const std::vector<std::string>& argv);

std::string usage_text();

// Human-readable exercise preamble: working hypothesis (all parameters)
// followed by the program listing with mnemonics.
std::string exercise_text(const ArchConfig& cfg, const Program& prog);

// Initial images read from "-mem FILE" / "-reg FILE": one "index value"
// decimal pair per line ('#' comments and blank lines skipped).
std::vector<std::pair<int, int>> load_pairs_file(const std::string& path);

}  // namespace freess
