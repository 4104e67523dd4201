//! Instance generators and closed-form converses for the classic settings.

mod caching;
mod cdc;
mod shuffling;

pub use caching::{
    averaged_bound, caching_closed_form, caching_instance, client_node, cyclic_add, cyclic_demand_family,
    cyclic_window_placement, decentralized_instance, man_placement, memory_sharing_placement, random_placement,
    CacheGroup, CachingSetting, CachingSpec, DecentralizedMode, DemandVector, Placement,
};
pub use cdc::{
    cdc_closed_form_s1, cdc_instance, cdc_normalized_bound, cdc_profile_bound_s1, cdc_prop_bound, cyclic_mapping,
    CdcSpec,
};
pub use shuffling::{
    cyclic_shuffle, random_storage, shuffle_average_bound, shuffling_closed_form, shuffling_instance,
    symmetric_storage, ShufflingSpec,
};
