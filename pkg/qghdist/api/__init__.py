import qghdist.algebra as algebra
import qghdist.freefield as freefield
import qghdist.ghdist as ghdist
import qghdist.lipnorm as lipnorm
import qghdist.nets as nets
