import rospy
import smach


class NavigateToArea(smach.State):
    """Drive the base into the predefined search area."""

    def __init__(self, robot, area):
        smach.State.__init__(self, outcomes=['arrived', 'unreachable', 'blocked'])
        self.robot = robot
        self.area = area

    def execute(self, userdata=None):
        entity = self.robot.ed.get_entity(self.area)
        if entity is None:
            return 'unreachable'
        plan = self.robot.base.global_planner.get_plan(entity.pose, 0.5)
        if not plan:
            return 'unreachable'
        if not self.robot.base.local_planner.execute(plan):
            return 'blocked'
        return 'arrived'


class NavigateToWaypoint(smach.State):
    """Drive the base to a named waypoint using the global planner."""

    def __init__(self, robot, waypoint, radius=0.15):
        smach.State.__init__(self, outcomes=['arrived', 'unreachable', 'blocked'])
        self.robot = robot
        self.waypoint = waypoint
        self.radius = radius

    def execute(self, userdata=None):
        constraint = self.robot.base.global_planner.waypoint_constraint(
            self.waypoint, self.radius)
        if constraint is None:
            return 'unreachable'
        plan = self.robot.base.global_planner.get_plan(constraint)
        if not plan:
            return 'unreachable'
        if not self.robot.base.local_planner.execute(plan):
            return 'blocked'
        return 'arrived'


class NavigateToRoom(smach.State):
    """Drive the base into a room and position it near the room center."""

    def __init__(self, robot, room):
        smach.State.__init__(self, outcomes=['arrived', 'unreachable'])
        self.robot = robot
        self.room = room

    def execute(self, userdata=None):
        entity = self.robot.ed.get_entity(self.room)
        if entity is None:
            return 'unreachable'
        plan = self.robot.base.global_planner.get_plan(entity.pose, 0.7)
        if not plan:
            return 'unreachable'
        self.robot.base.local_planner.execute(plan)
        return 'arrived'
