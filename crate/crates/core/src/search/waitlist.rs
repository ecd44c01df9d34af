use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

/// Traversal order of the waiting list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    /// Stack: last put is first out.
    #[default]
    Dfs,
    /// Queue: first put is first out.
    Bfs,
}

#[derive(Clone, Debug)]
pub struct WaitList<T> {
    order: Order,
    items: VecDeque<T>,
    peak: usize,
}

impl<T> WaitList<T> {
    pub fn new(order: Order) -> WaitList<T> {
        WaitList { order, items: VecDeque::new(), peak: 0 }
    }

    pub fn put(&mut self, item: T) {
        self.items.push_back(item);
        self.peak = self.peak.max(self.items.len());
    }

    pub fn get_next(&mut self) -> Option<T> {
        match self.order {
            Order::Dfs => self.items.pop_back(),
            Order::Bfs => self.items.pop_front(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Largest length reached so far.
    pub fn peak(&self) -> usize {
        self.peak
    }
}
