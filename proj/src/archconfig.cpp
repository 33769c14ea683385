#include "freess/archconfig.hpp"

#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

namespace freess {

void ArchConfig::validate() const {
    auto need = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError(what);
    };
    need(fetch_width >= 1, "-fw: fetch width must be >= 1");
    need(decode_width >= 1, "-dw: decode width must be >= 1");
    need(dispatch_width >= 1, "-pw: dispatch width must be >= 1");
    need(issue_width >= 1, "-iw: issue width must be >= 1");
    need(commit_width >= 1, "-cw: commit width must be >= 1");
    need(iw_slots >= 1, "-iws: instruction window size must be >= 1");
    need(rob_slots >= 1, "-rob: reorder buffer size must be >= 1");
    need(lq_slots >= 1, "-lq: load queue size must be >= 1");
    need(sq_slots >= 1, "-sq: store queue size must be >= 1");
    need(num_logical_regs >= 1, "-lr: logical register count must be >= 1");
    need(num_phys_regs > num_logical_regs,
         "-pr: physical registers must exceed logical registers (renaming needs a free destination)");
    for (int i = 0; i < kNumFuClasses; ++i) {
        need(fu_count[static_cast<size_t>(i)] >= 1, "functional unit count must be >= 1");
        need(fu_latency[static_cast<size_t>(i)] >= 1, "functional unit latency must be >= 1");
    }
    need(iterations >= 1, "-it: iteration count must be >= 1");
    need(memory_size_bytes >= 4 && memory_size_bytes % 4 == 0,
         "-memsz: memory size must be a positive multiple of 4");
}

namespace {

int parse_int(const std::string& flag, const std::string& value) {
    size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(value, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != value.size()) throw ConfigError(flag + ": expected an integer, got '" + value + "'");
    return v;
}

}  // namespace

CliOptions parse_args(const std::vector<std::string>& argv) {
    CliOptions opt;
    ArchConfig& c = opt.cfg;

    std::map<std::string, int*> int_flags{
        {"-fw", &c.fetch_width},   {"-dw", &c.decode_width}, {"-pw", &c.dispatch_width},
        {"-iw", &c.issue_width},   {"-cw", &c.commit_width}, {"-iws", &c.iw_slots},
        {"-rob", &c.rob_slots},    {"-lq", &c.lq_slots},     {"-sq", &c.sq_slots},
        {"-pr", &c.num_phys_regs}, {"-lr", &c.num_logical_regs},
        {"-afu", &c.fu_count[0]},  {"-mfu", &c.fu_count[1]}, {"-lfu", &c.fu_count[2]},
        {"-sfu", &c.fu_count[3]},  {"-bfu", &c.fu_count[4]},
        {"-mlat", &c.fu_latency[1]}, {"-llat", &c.fu_latency[2]},
        {"-slat", &c.fu_latency[3]}, {"-blat", &c.fu_latency[4]},
        {"-it", &c.iterations},    {"-memsz", &c.memory_size_bytes},
    };

    size_t i = 0;
    auto value_of = [&](const std::string& flag) -> std::string {
        if (i + 1 >= argv.size()) throw ConfigError(flag + ": missing value");
        return argv[++i];
    };

    for (; i < argv.size(); ++i) {
        const std::string& a = argv[i];
        if (auto it = int_flags.find(a); it != int_flags.end()) {
            *it->second = parse_int(a, value_of(a));
        } else if (a == "-ixsame") {
            c.issue_execute_same_cycle = parse_int(a, value_of(a)) != 0;
        } else if (a == "-wb0") {
            c.wakeup_same_cycle_as_writeback = parse_int(a, value_of(a)) != 0;
        } else if (a == "-mode") {
            std::string v = value_of(a);
            if (v == "forced") c.stream_mode = StreamMode::ForcedLoop;
            else if (v == "semantic") c.stream_mode = StreamMode::Semantic;
            else throw ConfigError("-mode: expected 'forced' or 'semantic', got '" + v + "'");
        } else if (a == "-spec") {
            std::string v = value_of(a);
            if (v == "taken") c.spec_policy = SpecPolicy::AlwaysTaken;
            else if (v == "btfn") c.spec_policy = SpecPolicy::BackwardTaken;
            else throw ConfigError("-spec: expected 'taken' or 'btfn', got '" + v + "'");
        } else if (a == "-batch") {
            c.batch_mode = true;
        } else if (a == "-dump") {
            c.dump_path = value_of(a);
        } else if (a == "-mem") {
            opt.mem_file = value_of(a);
        } else if (a == "-reg") {
            opt.reg_file = value_of(a);
        } else if (a == "-ex") {
            opt.example = parse_int(a, value_of(a));
            if (opt.example < 1 || opt.example > 3)
                throw ConfigError("-ex: example selector must be 1, 2 or 3");
        } else if (a == "--verify") {
            opt.verify = true;
            c.batch_mode = true;
        } else if (a == "--help" || a == "-h") {
            opt.help = true;
        } else if (!a.empty() && a[0] == '-' && a.size() > 1 && !isdigit(static_cast<unsigned char>(a[1]))) {
            throw ConfigError("unknown flag: " + a);
        } else {
            if (!opt.program_path.empty())
                throw ConfigError("more than one program path given: '" + a + "'");
            opt.program_path = a;
        }
    }
    c.validate();
    return opt;
}

std::string usage_text() {
    std::ostringstream os;
    os << "usage: freess [options] PROGRAM | -ex K\n"
          "\n"
          "Cycle-accurate simulator of a RISC-V-inspired superscalar processor\n"
          "(extended Tomasulo: register renaming, instruction window, reorder\n"
          "buffer, load/store queues, speculative loop execution).\n"
          "\n"
          "options:\n"
          "  -fw -dw -pw -iw -cw N   fetch/decode/dispatch/issue/commit width\n"
          "  -iws -rob -lq -sq N     IW / ROB / load-queue / store-queue slots\n"
          "  -pr -lr N               physical / logical register count\n"
          "  -afu -mfu -lfu -sfu -bfu N   functional-unit counts (A M L S B)\n"
          "  -mlat -llat -slat -blat N    functional-unit latencies (M L S B)\n"
          "  -it N                   loop iterations (default 3)\n"
          "  -ixsame {0,1}           issue and execute in the same cycle (default 1)\n"
          "  -wb0 {0,1}              wakeup usable in the write-back cycle (default 1)\n"
          "  -mode {forced,semantic} dynamic stream: forced loop or computed branches\n"
          "  -spec {taken,btfn}      speculation: always-taken or backward-taken\n"
          "  -batch                  run to completion without stepping\n"
          "  -dump FILE              per-cycle machine-readable dump\n"
          "  -mem FILE -reg FILE     initial memory / register images (index value)\n"
          "  -memsz BYTES            data memory size (default 65536)\n"
          "  -ex K                   run bundled example K in {1,2,3}\n"
          "  --verify                also run the in-order reference and compare\n"
          "  --help                  this text\n"
          "\n"
          "program file: one instruction per line, four integers\n"
          "'opcode op1 op2 op3'; '#' comments. Encoding:\n"
          "  opcode  mnemonic  format\n"
          "  1       ADD       xi <- xj + xk        (op1=i op2=j op3=k)\n"
          "  2       ADDI      xi <- xj + I         (op1=i op2=j op3=I)\n"
          "  3       LW        xi <- Mem[xj + I]    (op1=i op2=j op3=I)\n"
          "  4       SW        Mem[xj + I] <- xi    (op1=i op2=j op3=I)\n"
          "  5       BEQ       if xi = xj jump I    (op1=i op2=j op3=I)\n"
          "  6       BNE       if xi != xj jump I   (op1=i op2=j op3=I)\n"
          "  7       MUL       xi <- xj * xk        (op1=i op2=j op3=k)\n"
          "branch displacement I counts instructions from the branch itself:\n"
          "positive forward, negative backward.\n";
    return os.str();
}

std::string exercise_text(const ArchConfig& cfg, const Program& prog) {
    std::ostringstream os;
    os << "============================ EXERCISE ============================\n";
    os << "Working hypothesis: a superscalar processor with the following\n"
          "parameters executes the program below";
    if (cfg.stream_mode == StreamMode::ForcedLoop)
        os << " as a loop of " << cfg.iterations << " iteration" << (cfg.iterations == 1 ? "" : "s");
    os << ".\n\n";

    os << "  Fetch width:        " << cfg.fetch_width << " instructions/cycle\n";
    os << "  Decode width:       " << cfg.decode_width << " instructions/cycle\n";
    os << "  Dispatch width:     " << cfg.dispatch_width << " instructions/cycle\n";
    os << "  Issue width:        " << cfg.issue_width << " instructions/cycle\n";
    os << "  Commit width:       " << cfg.commit_width << " instructions/cycle\n";
    os << "  Buffers:            " << cfg.iw_slots << " IW-SLOTS, " << cfg.rob_slots
       << " ROB-SLOTS, " << cfg.lq_slots << " LQ-SLOTS, " << cfg.sq_slots << " SQ-SLOTS\n";
    os << "  Registers:          " << cfg.num_phys_regs << " Physical Registers, "
       << cfg.num_logical_regs << " Logical Registers\n";
    os << "  Functional units:   ";
    for (int i = 0; i < kNumFuClasses; ++i) {
        if (i) os << ", ";
        os << fu_letter(static_cast<FuClass>(i)) << "x" << cfg.fu_count[static_cast<size_t>(i)];
    }
    os << "\n";
    os << "  Unit latencies:     ";
    for (int i = 0; i < kNumFuClasses; ++i) {
        if (i) os << ", ";
        os << fu_letter(static_cast<FuClass>(i)) << "=" << cfg.fu_latency[static_cast<size_t>(i)];
    }
    os << "\n";
    os << "  Issue/execute:      " << (cfg.issue_execute_same_cycle ? "same cycle" : "separate cycles")
       << " (ixsame=" << (cfg.issue_execute_same_cycle ? 1 : 0) << ")\n";
    os << "  Wakeup:             " << (cfg.wakeup_same_cycle_as_writeback
                                           ? "usable in the write-back cycle"
                                           : "usable one cycle after write-back")
       << " (wb0=" << (cfg.wakeup_same_cycle_as_writeback ? 1 : 0) << ")\n";
    os << "  Iterations:         " << cfg.iterations << "\n";
    os << "  Stream mode:        "
       << (cfg.stream_mode == StreamMode::ForcedLoop ? "forced loop" : "semantic") << "\n";
    os << "  Speculation:        "
       << (cfg.spec_policy == SpecPolicy::AlwaysTaken ? "branches assumed taken"
                                                      : "backward taken, forward not taken")
       << "\n";
    os << "  Data memory:        " << cfg.memory_size_bytes << " bytes\n";
    os << "\nProgram:\n";
    for (int i = 0; i < prog.size(); ++i) {
        const Instruction& in = prog.instrs[static_cast<size_t>(i)];
        os << "  " << std::setw(2) << i << ":  " << std::setw(2) << static_cast<int>(in.opcode)
           << " " << std::setw(3) << in.op1 << " " << std::setw(3) << in.op2 << " "
           << std::setw(5) << in.op3 << "    # " << in.to_string() << "\n";
    }
    os << "==================================================================\n";
    return os.str();
}

std::vector<std::pair<int, int>> load_pairs_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open file: " + path);
    std::vector<std::pair<int, int>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream is(line);
        int a = 0, b = 0;
        std::string rest;
        if (!(is >> a >> b) || (is >> rest)) {
            std::ostringstream os;
            os << path << ":" << lineno << ": expected 'index value'";
            throw ConfigError(os.str());
        }
        out.emplace_back(a, b);
    }
    return out;
}

}  // namespace freess
