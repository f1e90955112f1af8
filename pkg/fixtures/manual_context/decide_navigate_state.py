import rospy
import smach


class _DecideNavigateState(smach.State):
    """Decide whether to navigate to a waypoint or a room next.

    Works through the remaining search targets one by one. Returns
    'waypoint' or 'room' depending on the kind of the next target and
    'none' once every target has been visited.
    """

    def __init__(self, robot, room):
        smach.State.__init__(self, outcomes=['waypoint', 'room', 'none'])
        self.robot = robot
        self.room = room
        self._targets = None

    def execute(self, userdata=None):
        if self._targets is None:
            self._targets = self.robot.ed.search_targets(self.room)
        if not self._targets:
            return 'none'
        target = self._targets.pop(0)
        if target.kind == 'waypoint':
            return 'waypoint'
        return 'room'
