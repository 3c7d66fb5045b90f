from .pointer_chase import (
    PointerChaseInstance,
    FoolingFamilyParams,
    FoolingCertificate,
    lk_encode,
    lk_decode,
    lk_decide,
    lk_decide_streamed,
    lk_generate,
    lk_fooling_family,
    lk_encoded_length)

from .phase_locked import (
    PhaseLockedInstance,
    DefaultAcceptor,
    ConstantAcceptor,
    TableAcceptor,
    lkphase_encode,
    lkphase_decode,
    lkphase_decide,
    lkphase_decide_blind,
    lkphase_decide_streamed,
    lkphase_projection,
    lkphase_collision_demo,
    lkphase_fooling_family,
    lkphase_generate)

from .tree_eval import (
    TreeInstance,
    Leaf,
    Gate,
    tree_encode,
    tree_decode,
    tree_decide,
    tree_generate)

from .container import pack_instance, unpack_instance, save_instance, load_instance
