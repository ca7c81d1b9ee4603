//! The RESET / START / READY / WORK handshake of the encryption unit.

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Phase {
    Setup,
    Ready,
    Working,
}

/// Rising edges seen on the inputs during one clock tick.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Inputs {
    pub reset_edge: bool,
    pub start_edge: bool,
}

/// What the datapath should execute during a tick.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Activity {
    Idle,
    SetupCycle(usize),
    WorkCycle(usize),
    /// A block was abandoned by RESET.
    Aborted,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DeviceState {
    pub phase: Phase,
    pub ready: bool,
    /// High during every tick that executes a work cycle.
    pub work: bool,
    pub cycle_counter: u64,
    pub blocks_done: u64,
    /// Next setup cycle to run; equal to `setup_cycles` once setup is done.
    pub setup_index: usize,
    /// Work cycles already executed for the current block.
    pub work_index: usize,
    pub setup_cycles: usize,
    pub work_cycles: usize,
}

impl DeviceState {
    pub fn new(setup_cycles: usize, work_cycles: usize) -> Self {
        assert!(work_cycles > 0, "a block needs at least one work cycle");
        DeviceState {
            phase: Phase::Setup,
            ready: false,
            work: false,
            cycle_counter: 0,
            blocks_done: 0,
            setup_index: 0,
            work_index: 0,
            setup_cycles,
            work_cycles,
        }
    }

    /// One clock tick. Returns the next state and the work the datapath
    /// performs during this tick.
    pub fn step(&self, inputs: Inputs) -> (DeviceState, Activity) {
        let mut s = *self;
        s.cycle_counter += 1;
        if inputs.reset_edge {
            let aborted = s.phase == Phase::Working;
            // an unfinished setup carries on where it stopped
            s.phase = Phase::Setup;
            s.ready = false;
            s.work = false;
            s.work_index = 0;
            return (s, if aborted { Activity::Aborted } else { Activity::Idle });
        }
        match s.phase {
            Phase::Setup => {
                s.work = false;
                if s.setup_index < s.setup_cycles {
                    let i = s.setup_index;
                    s.setup_index += 1;
                    if s.setup_index == s.setup_cycles {
                        s.phase = Phase::Ready;
                        s.ready = true;
                    }
                    (s, Activity::SetupCycle(i))
                } else {
                    s.phase = Phase::Ready;
                    s.ready = true;
                    (s, Activity::Idle)
                }
            }
            Phase::Ready if inputs.start_edge => {
                s.phase = Phase::Working;
                s.work_index = 0;
                s.run_work_cycle()
            }
            Phase::Ready => {
                s.work = false;
                (s, Activity::Idle)
            }
            Phase::Working => s.run_work_cycle(),
        }
    }

    fn run_work_cycle(mut self) -> (DeviceState, Activity) {
        let i = self.work_index;
        self.work = true;
        self.work_index += 1;
        if self.work_index == self.work_cycles {
            self.phase = Phase::Ready;
            self.blocks_done += 1;
            self.work_index = 0;
        }
        (self, Activity::WorkCycle(i))
    }
}
