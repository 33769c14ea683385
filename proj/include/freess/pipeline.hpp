#pragma once

#include <array>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "freess/archconfig.hpp"
#include "freess/isa.hpp"
#include "freess/microstate.hpp"

namespace freess {

// Pipeline stages in evaluation order is C,W,X/I,P,D,F; the letters follow
// the screen: F=Fetch, D=Decode/Renaming, P=Dispatch, I=Issue, X=Execute,
// W=Write-back, C=Commit.
enum class Stage : int { F = 0, D, P, I, X, W, C };
inline constexpr int kNumStages = 7;
char stage_letter(Stage s);

enum class StallReason {
    FREE_POOL_EMPTY,
    IW_FULL,
    ROB_FULL,
    FU_BUSY,
    OPERAND_PENDING,
    LQ_FULL,
    SQ_FULL,
    COMMIT_BLOCKED,
    WIDTH_LIMIT,
    FETCH_BREAK,
};
const char* reason_name(StallReason r);

struct StallEvent {
    int cycle;
    Stage stage;
    StallReason reason;
    int dyn_id;
    int pc;
    std::string text;
};

// One element of the dynamic instruction stream, with everything the
// single-screen display needs after the hardware slots are recycled.
struct DynInst {
    int dyn_id = kNone;
    int static_idx = kNone;
    int iteration = kNone;  // kNone on wrong-path fetches
    long stream_pos = -1;   // position in the committed stream; -1 wrong path
    Instruction instr;
    bool wrong_path = false;
    bool squashed = false;
    bool exception = false;

    // stage-entry cycles, kPending when not reached
    std::array<int, kNumStages> stage_cycle{kPending, kPending, kPending, kPending,
                                            kPending, kPending, kPending};
    int& at(Stage s) { return stage_cycle[static_cast<size_t>(s)]; }
    int at(Stage s) const { return stage_cycle[static_cast<size_t>(s)]; }

    // rename results
    int dest_p = kNone;
    int old_p = kNone;
    int src_pj = kNone;
    int src_pk = kNone;
    int value_p = kNone;  // store-data register (SW)

    // hardware slot ids and display snapshots
    int iw_slot = kNone;
    int rob_id = kNone;
    int cj = kPending;  // final Cj/Ck snapshot for display
    int ck = kPending;
    int issue_cycle = kPending;

    // branches
    bool spec_taken = false;
    bool actual_taken = false;
    bool resolved = false;

    int32_t result = 0;  // computed at issue (ALU/MUL) or at memory (LW)
};

struct Stats {
    long committed = 0;
    int ctot = 0;  // cycle index of the last commit + 1
    std::array<long, kNumStages> stage_stalls{};
    // IPC as a 2-decimal string, rounded half-up (exact integer arithmetic).
    std::string ipc() const;
};

std::string format_ipc(long committed, int ctot);

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CycleReport {
    int cycle = 0;
    std::array<int, kNumStages> entered{};  // instructions entering each stage
    int stalls_logged = 0;
};

class SimState {
public:
    SimState(const ArchConfig& cfg, const Program& prog);

    // Optional initial images, applied before the first cycle.
    void init_memory(const std::vector<std::pair<int, int>>& pairs);
    void init_registers(const std::vector<std::pair<int, int>>& pairs);

    // Advance one cycle (no-op once finished). Stages are evaluated
    // C, W, X/I, P, D, F; resources freed this cycle become available
    // next cycle.
    CycleReport step();

    Stats run_to_completion(const std::function<void(const SimState&)>& per_cycle_hook = {});

    bool finished() const { return finished_; }
    bool halted() const { return halted_; }
    const std::string& halt_message() const { return halt_message_; }
    int cycle() const { return cycle_; }
    long committed() const { return committed_; }
    long total_stream() const { return total_stream_; }
    int last_commit_cycle() const { return last_commit_cycle_; }
    Stats stats() const;

    const ArchConfig& config() const { return cfg_; }
    const Program& program() const { return prog_; }
    const MachineState& machine() const { return m_; }
    MachineState& machine_mut() { return m_; }
    const std::vector<DynInst>& instructions() const { return insts_; }
    const std::vector<StallEvent>& events() const { return events_; }
    const std::vector<int>& committed_ids() const { return committed_ids_; }
    const CycleReport& last_report() const { return last_report_; }
    const std::array<long, kNumStages>& stage_stalls() const { return stage_stalls_; }

    // per-class number of operations in execute this cycle (display)
    std::array<int, kNumFuClasses> fu_busy() const;

    // Verify the structural invariants at the current cycle boundary;
    // throws SimError naming the violated invariant.
    void check_invariants() const;

private:
    struct ExecOp {
        int dyn_id;
        int x_start;        // first execute cycle
        int finish_cycle;   // last execute cycle; kPending for waiting loads
        bool addr_done = false;
        int earliest_mem = kPending;  // loads: first cycle memory may be tried
    };

    // stream geometry (forced-loop mode)
    int static_of(long pos) const { return static_cast<int>(pos % prog_.size()); }
    int iter_of(long pos) const { return static_cast<int>(pos / prog_.size()); }
    bool forced_actual_taken(long pos) const;

    void phase_commit();
    void phase_writeback();
    void phase_execute_issue();
    void phase_dispatch();
    void phase_rename();
    void phase_fetch();
    void resolve_branch(DynInst& br);
    void squash_younger(const DynInst& br);
    void log_stall(Stage st, StallReason r, const DynInst& di, const std::string& text);
    DynInst& fetch_one_correct(long pos);
    DynInst& fetch_one_wrong(int static_idx);
    int32_t compute_alu(const Instruction& in, int32_t vj, int32_t vk) const;

    ArchConfig cfg_;
    Program prog_;
    MachineState m_;

    std::vector<DynInst> insts_;
    std::deque<int> fetch_latch_;   // fetched, awaiting rename
    std::deque<int> rename_latch_;  // renamed, awaiting dispatch
    std::vector<ExecOp> in_flight_;
    FuBank fus_;

    long total_stream_ = 0;
    long stream_pos_ = 0;      // next correct-path stream position to fetch
    bool on_wrong_path_ = false;
    int wrong_pc_ = 0;
    bool fetch_stopped_ = false;
    bool fetch_blocked_this_cycle_ = false;

    int cycle_ = 0;
    long committed_ = 0;
    std::vector<int> committed_ids_;
    int last_commit_cycle_ = -1;
    std::array<long, kNumStages> stage_stalls_{};
    std::vector<StallEvent> events_;
    CycleReport last_report_;
    bool finished_ = false;
    bool halted_ = false;
    std::string halt_message_;
};

}  // namespace freess
