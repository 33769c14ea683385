#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "freess/archconfig.hpp"
#include "freess/isa.hpp"

namespace freess {

inline constexpr int kPending = -1;  // "value yet to be produced", rendered '-'
inline constexpr int kNone = -1;     // absent field / no register

struct PhysReg {
    int32_t value = 0;
    bool ready = false;
    bool allocated = false;
};

struct RenameResult {
    int new_phys = kNone;
    int old_phys = kNone;
};

// One instruction-window slot. A slot is reclaimed when its instruction
// fires (issues); the per-instruction display keeps the final field values.
struct IwSlot {
    bool occupied = false;
    bool issued = false;
    Opcode opcode{Opcode::ADD};
    int dest_p = kNone;
    int src_pj = kNone;
    int src_pk = kNone;
    int src_pl = kNone;  // reserved third source, unused by this ISA
    int imm = 0;
    int cj = kPending;  // cycle the j source value reached the IW
    int ck = kPending;
    int cl = kPending;
    int usable_j = kPending;  // first cycle the value can gate issue
    int usable_k = kPending;
    int dyn_id = kNone;
};

struct RobSlot {
    bool live = false;
    bool retiring = false;  // committed this cycle, slot reclaimed at cycle end
    int pc = kNone;
    int dest_logical = kNone;
    int old_phys = kNone;
    int dest_phys = kNone;
    bool s = false;  // store
    bool x = false;  // exception
    bool c = false;  // completed (result written back)
    int dyn_id = kNone;
};

struct LsqEntry {
    int dyn_id = kNone;
    int pc = kNone;
    Opcode op{Opcode::LW};
    bool addr_known = false;
    int32_t efad = 0;
    // loads
    int dest_p = kNone;
    int queued_cycle = kPending;   // Ci at enqueue
    int value_cycle = kPending;    // Ci once the value is on the bus
    bool mem_done = false;
    int32_t load_value = 0;
    // stores
    int value_p = kNone;           // Pl
    int value_cycle_store = kPending;  // Cl
};

enum class LoadAccess { Proceed, Forward, Wait };

struct LoadAccessResult {
    LoadAccess kind = LoadAccess::Proceed;
    int32_t value = 0;  // forwarded value when kind == Forward
};

class DataMemory {
public:
    explicit DataMemory(int size_bytes = 65536)
        : words_(static_cast<size_t>(size_bytes / 4), 0), size_bytes_(size_bytes) {}

    bool addr_ok(int64_t efad) const {
        return efad >= 0 && efad + 4 <= size_bytes_ && efad % 4 == 0;
    }
    int32_t read(int64_t efad) const { return words_[static_cast<size_t>(efad / 4)]; }
    void write(int64_t efad, int32_t v) {
        words_[static_cast<size_t>(efad / 4)] = v;
        touched_.push_back(static_cast<int32_t>(efad));
    }
    int size_bytes() const { return size_bytes_; }
    // Word addresses written at least once, in write order (may repeat).
    const std::vector<int32_t>& touched() const { return touched_; }

private:
    std::vector<int32_t> words_;
    int size_bytes_;
    std::vector<int32_t> touched_;
};

// Per-class functional-unit bank. Units are fully pipelined: the only
// structural limit is one new operation per unit per cycle.
struct FuBank {
    std::array<int, kNumFuClasses> count{};
    std::array<int, kNumFuClasses> latency{};
    std::array<int, kNumFuClasses> issued_this_cycle{};

    void configure(const ArchConfig& cfg) {
        count = cfg.fu_count;
        latency = cfg.fu_latency;
        new_cycle();
    }
    void new_cycle() { issued_this_cycle.fill(0); }
    bool can_accept(FuClass c) const {
        return issued_this_cycle[static_cast<size_t>(c)] < count[static_cast<size_t>(c)];
    }
    void note_issue(FuClass c) { ++issued_this_cycle[static_cast<size_t>(c)]; }
    int lat(FuClass c) const { return latency[static_cast<size_t>(c)]; }
};

// Everything the rollback walk needs to undo for one squashed instruction.
struct SquashRecord {
    int dyn_id = kNone;
    int rob_id = kNone;
};

// The tracked hardware structures of one simulated machine: physical
// register file, register map, free pool, instruction window, circular
// reorder buffer, load/store queues, data memory.
class MachineState {
public:
    MachineState(const ArchConfig& cfg);

    // --- renaming ---------------------------------------------------------
    // Allocate a rename destination for logical register xi. Returns nullopt
    // when the free pool is empty (structural hazard, caller records the
    // stall); the map is left untouched in that case.
    std::optional<RenameResult> rename_alloc(int logical);

    // --- instruction window ----------------------------------------------
    int iw_free_slots() const;
    // Occupies the lowest-indexed free slot; returns its id, or nullopt when
    // the window is full.
    std::optional<int> iw_insert(const IwSlot& record);
    // Broadcast: every occupied slot waiting on phys reg p gets its readiness
    // cycle set. Returns the number of flags set.
    int iw_wakeup(int phys, int cycle);
    // Program-order pick of up to `width` issue-eligible slots backed by a
    // free unit. Marks them issued. Eligible-but-unselected slot ids are
    // returned separately with the blocking cause.
    struct SelectResult {
        std::vector<int> selected;
        std::vector<std::pair<int, bool>> blocked;  // slot id, true=FU busy / false=width
    };
    SelectResult iw_select(FuBank& fus, int width, int cycle);
    // Oldest (lowest dyn id) occupied un-issued slot, if any.
    std::optional<int> iw_oldest_unissued() const;
    bool iw_slot_eligible(const IwSlot& slot, int cycle) const;

    // --- reorder buffer ----------------------------------------------------
    int rob_live_count() const { return rob_count_; }
    int rob_free_slots() const { return static_cast<int>(rob_.size()) - rob_count_; }
    bool rob_empty() const { return rob_count_ == 0; }
    int rob_head() const { return rob_head_; }
    std::optional<int> rob_alloc(const RobSlot& record);
    // Longest head-anchored run of completed entries, truncated to width.
    std::vector<int> rob_commit_ready(int width) const;
    // Mark a head-run entry retiring; the slot is reclaimed by end_cycle().
    void rob_retire(int rob_id);
    // Undo tail..toRobId (exclusive): restore the register map, return rename
    // destinations to the pool, free IW slots and LQ/SQ entries. Returns the
    // squashed instructions youngest-first.
    std::vector<SquashRecord> rob_rollback(int to_rob_id);

    // --- load/store queues -------------------------------------------------
    int lq_free_slots() const { return lq_cap_ - static_cast<int>(lq_.size()); }
    int sq_free_slots() const { return sq_cap_ - static_cast<int>(sq_.size()); }
    // Reserve a program-ordered entry at dispatch (EFAD still unknown).
    bool lsq_reserve(const LsqEntry& entry);
    // Fill the effective address computed by address generation.
    void lsq_fill_addr(int dyn_id, int32_t efad, int cycle);
    LsqEntry* lsq_find(int dyn_id);
    // Store-to-load ordering: wait while any older store address is unknown,
    // forward from the youngest older same-address store when its value is
    // ready, wait when that value is pending, otherwise access memory.
    LoadAccessResult lsq_load_may_access(const LsqEntry& load) const;
    void lsq_release(int dyn_id);  // at commit (deferred) or rollback

    // --- bookkeeping -------------------------------------------------------
    // Apply end-of-cycle reclamation: pool returns from commit, retired ROB
    // slots, fired IW slots. Freed resources become available next cycle.
    void end_cycle();

    void set_reg_value(int logical, int32_t value);
    int32_t reg_value(int logical) const;
    bool reg_ready(int logical) const;
    int map_of(int logical) const { return reg_map_[static_cast<size_t>(logical)]; }

    // exposed structures (render/tests read them directly)
    std::vector<PhysReg> pregs;
    std::deque<int> free_pool;
    std::vector<IwSlot> iw;
    std::deque<LsqEntry> lq;
    std::deque<LsqEntry> sq;
    DataMemory mem;

    const std::vector<int>& reg_map() const { return reg_map_; }
    const std::vector<RobSlot>& rob() const { return rob_; }
    const RobSlot& rob_slot(int id) const { return rob_[static_cast<size_t>(id)]; }
    RobSlot& rob_slot_mut(int id) { return rob_[static_cast<size_t>(id)]; }

    int num_phys_regs() const { return static_cast<int>(pregs.size()); }
    int num_logical_regs() const { return static_cast<int>(reg_map_.size()); }

    // ROB ids from head to tail, live entries only.
    std::vector<int> rob_live_ids() const;

    // mark a commit-time pool return (applied by end_cycle)
    void defer_pool_return(int phys) { pending_pool_returns_.push_back(phys); }
    void defer_lsq_release(int dyn_id) { pending_lsq_release_.push_back(dyn_id); }

private:
    std::vector<int> reg_map_;
    std::vector<RobSlot> rob_;
    int rob_head_ = 0;
    int rob_tail_ = 0;
    int rob_count_ = 0;
    int lq_cap_;
    int sq_cap_;
    bool wakeup_usable_same_cycle_ = true;

    std::vector<int> pending_pool_returns_;
    std::vector<int> pending_lsq_release_;
};

}  // namespace freess
